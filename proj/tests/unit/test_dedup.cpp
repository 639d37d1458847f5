#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "curator/dedup.hpp"
#include "curator/errors.hpp"
#include "doctest.h"

using namespace curator;

namespace {

FeatureSet set_of(std::initializer_list<std::uint32_t> ids) {
    FeatureSet s;
    s.ids = ids;
    std::sort(s.ids.begin(), s.ids.end());
    return s;
}

}  // namespace

TEST_CASE("a bucket of identical docs collapses to one survivor") {
    const FeatureSet shared = set_of({1, 2, 3, 4, 5});
    std::unordered_map<std::uint64_t, FeatureSet> features;
    std::vector<std::uint64_t> bucket;
    for (std::uint64_t id = 10; id < 15; ++id) {
        features[id] = shared;
        bucket.push_back(id);
    }
    LshParams params;
    params.rng_seed = 4;
    const auto pairs = dedup_bucket(bucket, features, params);
    REQUIRE(pairs.size() == 4);
    const std::uint64_t anchor = pairs.front().anchor_id;
    std::set<std::uint64_t> marked;
    for (const auto& p : pairs) {
        CHECK(p.anchor_id == anchor);
        CHECK(p.similarity == 1.0);
        marked.insert(p.duplicate_id);
    }
    CHECK(marked.size() == 4);
    CHECK_FALSE(marked.contains(anchor));
}

TEST_CASE("mutually dissimilar buckets produce no marks") {
    std::unordered_map<std::uint64_t, FeatureSet> features;
    features[1] = set_of({1, 2, 3});
    features[2] = set_of({11, 12, 13});
    features[3] = set_of({21, 22, 23});
    LshParams params;
    params.rng_seed = 9;
    CHECK(dedup_bucket({1, 2, 3}, features, params).empty());
}

TEST_CASE("near pair plus outlier: one mark, outlier untouched") {
    // J(A,A') = 1.0; J with B far below threshold.
    std::unordered_map<std::uint64_t, FeatureSet> features;
    features[100] = set_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    features[101] = set_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    features[102] = set_of({1, 2, 900, 901, 902, 903, 904, 905, 906, 907});
    LshParams params;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        params.rng_seed = seed;
        const auto pairs = dedup_bucket({100, 101, 102}, features, params);
        REQUIRE(pairs.size() == 1);
        const bool a_first = pairs[0].anchor_id == 100;
        CHECK((pairs[0].anchor_id == 100 || pairs[0].anchor_id == 101));
        CHECK(pairs[0].duplicate_id == (a_first ? 101 : 100));
        CHECK(pairs[0].similarity == 1.0);
    }
}

TEST_CASE("bucket sampling is deterministic per seed and contents") {
    std::mt19937_64 rng(55);
    std::unordered_map<std::uint64_t, FeatureSet> features;
    std::vector<std::uint64_t> bucket;
    for (std::uint64_t id = 0; id < 12; ++id) {
        FeatureSet f;
        for (int k = 0; k < 30; ++k) {
            f.ids.push_back(static_cast<std::uint32_t>(rng() % 1000));
        }
        std::sort(f.ids.begin(), f.ids.end());
        f.ids.erase(std::unique(f.ids.begin(), f.ids.end()), f.ids.end());
        features[id] = std::move(f);
        bucket.push_back(id);
    }
    LshParams params;
    params.rng_seed = 31337;
    params.jaccard_threshold = 0.3;
    const auto a = dedup_bucket(bucket, features, params);
    auto reversed = bucket;
    std::reverse(reversed.begin(), reversed.end());
    const auto b = dedup_bucket(reversed, features, params);
    CHECK(a == b);
}

TEST_CASE("signature-based bucket similarity is available behind a flag") {
    std::mt19937_64 rng(7);
    FeatureSet shared;
    for (int k = 0; k < 200; ++k) {
        shared.ids.push_back(static_cast<std::uint32_t>(rng() % kFeatureSpace));
    }
    std::sort(shared.ids.begin(), shared.ids.end());
    shared.ids.erase(std::unique(shared.ids.begin(), shared.ids.end()),
                     shared.ids.end());
    std::unordered_map<std::uint64_t, FeatureSet> features;
    features[1] = shared;
    features[2] = shared;

    LshParams params;
    params.rng_seed = 3;
    params.signature_similarity = true;
    std::unordered_map<std::uint64_t, MinHashSignature> signatures;
    signatures[1] = minhash_signature(features[1], params);
    signatures[2] = minhash_signature(features[2], params);

    const auto pairs = dedup_bucket({1, 2}, features, params, &signatures);
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].similarity == 1.0);

    // The flag without signatures is a usage error.
    CHECK_THROWS_AS(dedup_bucket({1, 2}, features, params, nullptr),
                    std::invalid_argument);
}

TEST_CASE("transitive pairs form one component with one representative") {
    std::map<std::uint64_t, std::string> datasets = {
        {1, "web"}, {2, "web"}, {3, "web"}};
    const PriorityOrder priority{{"web"}};
    const auto graph = resolve_components(
        {{1, 2, 0.9}, {2, 3, 0.85}}, priority, datasets);
    REQUIRE(graph.components.size() == 1);
    CHECK(graph.components[0].members == std::vector<std::uint64_t>{1, 2, 3});
    CHECK(graph.components[0].representative == 1);
    CHECK(graph.is_duplicate(2));
    CHECK(graph.is_duplicate(3));
    CHECK_FALSE(graph.is_duplicate(1));
}

TEST_CASE("representative comes from the highest priority dataset") {
    std::map<std::uint64_t, std::string> datasets = {
        {5, "cc-2020-50"}, {9, "books3"}, {7, "cc-2020-50"}};
    const PriorityOrder priority{{"books3", "cc-2020-50"}};
    const auto graph = resolve_components(
        {{5, 9, 0.95}, {7, 9, 0.9}}, priority, datasets);
    REQUIRE(graph.components.size() == 1);
    CHECK(graph.components[0].representative == 9);
    CHECK(graph.components[0].representative_dataset == "books3");
    CHECK(graph.is_duplicate(5));
    CHECK(graph.is_duplicate(7));
    CHECK_FALSE(graph.is_duplicate(9));
}

TEST_CASE("priority ties break by smallest doc id") {
    std::map<std::uint64_t, std::string> datasets = {
        {42, "web"}, {17, "web"}, {99, "web"}};
    const PriorityOrder priority{{"web"}};
    const auto graph = resolve_components(
        {{42, 17, 0.9}, {99, 17, 0.9}}, priority, datasets);
    REQUIRE(graph.components.size() == 1);
    CHECK(graph.components[0].representative == 17);
}

TEST_CASE("empty pair set keeps every doc as its own component") {
    std::map<std::uint64_t, std::string> datasets = {
        {1, "a"}, {2, "a"}, {3, "b"}};
    const PriorityOrder priority{{"a", "b"}};
    const auto graph = resolve_components({}, priority, datasets);
    CHECK(graph.components.size() == 3);
    for (const auto& c : graph.components) {
        CHECK(c.members.size() == 1);
        CHECK(c.representative == c.members[0]);
    }
    CHECK_FALSE(graph.is_duplicate(1));
    CHECK_FALSE(graph.is_duplicate(2));
    CHECK_FALSE(graph.is_duplicate(3));
}

TEST_CASE("a dataset missing from the priority order is an error") {
    std::map<std::uint64_t, std::string> datasets = {{1, "web"}, {2, "books"}};
    const PriorityOrder priority{{"web"}};
    CHECK_THROWS_AS(resolve_components({{1, 2, 0.9}}, priority, datasets),
                    DataError);
}

TEST_CASE("edges are unique and sorted after resolution") {
    std::map<std::uint64_t, std::string> datasets = {
        {1, "web"}, {2, "web"}, {3, "web"}};
    const PriorityOrder priority{{"web"}};
    // The same unordered pair arriving from two buckets collapses to one
    // edge.
    const auto graph = resolve_components(
        {{2, 1, 0.9}, {1, 2, 0.9}, {3, 2, 0.81}}, priority, datasets);
    CHECK(graph.edges.size() == 2);
    for (std::size_t i = 1; i < graph.edges.size(); ++i) {
        const auto prev = std::minmax(graph.edges[i - 1].duplicate_id,
                                      graph.edges[i - 1].anchor_id);
        const auto cur = std::minmax(graph.edges[i].duplicate_id,
                                     graph.edges[i].anchor_id);
        CHECK(prev < cur);
    }
}

TEST_CASE("exactly one representative per component, priority minimal") {
    std::mt19937_64 rng(17);
    std::map<std::uint64_t, std::string> datasets;
    const std::vector<std::string> names = {"books", "wiki", "cc"};
    for (std::uint64_t id = 0; id < 200; ++id) {
        datasets[id] = names[rng() % names.size()];
    }
    std::vector<DuplicatePair> pairs;
    for (int i = 0; i < 150; ++i) {
        const std::uint64_t a = rng() % 200;
        const std::uint64_t b = rng() % 200;
        if (a != b) pairs.push_back({a, b, 0.9});
    }
    const PriorityOrder priority{names};
    const auto graph = resolve_components(pairs, priority, datasets);

    std::size_t total_members = 0;
    for (const auto& c : graph.components) {
        total_members += c.members.size();
        const int rep_rank = priority.rank_of(datasets.at(c.representative));
        bool rep_in_members = false;
        for (const auto id : c.members) {
            CHECK(priority.rank_of(datasets.at(id)) >= rep_rank);
            rep_in_members |= id == c.representative;
        }
        CHECK(rep_in_members);
    }
    CHECK(total_members == datasets.size());
}
