#include <cmath>
#include <numeric>
#include <vector>

#include "curator/blending.hpp"
#include "curator/errors.hpp"
#include "doctest.h"

using namespace curator;

namespace {

// Table-style mixing weights in percent; normalized before use.
std::vector<DatasetSpec> fifteen_dataset_mix() {
    const std::vector<std::pair<const char*, double>> rows = {
        {"books3", 14.3},         {"openwebtext2", 19.3},
        {"stackexchange", 5.7},   {"pubmed-abstracts", 2.9},
        {"wikipedia", 4.8},       {"gutenberg", 0.9},
        {"bookcorpus2", 1.0},     {"nih-exporter", 0.2},
        {"arxiv", 1.4},           {"github", 1.6},
        {"pile-cc", 9.4},         {"cc-2020-50", 13.0},
        {"cc-2021-04", 15.7},     {"realnews", 9.0},
        {"cc-stories", 0.9},
    };
    std::vector<DatasetSpec> specs;
    for (const auto& [name, pct] : rows) {
        DatasetSpec s;
        s.name = name;
        s.weight = pct;
        specs.push_back(s);
    }
    normalize_weights(specs);
    return specs;
}

}  // namespace

TEST_CASE("two equal weights split an even batch evenly") {
    std::vector<DatasetSpec> specs(2);
    specs[0] = {"a", 0.5, 0, 0};
    specs[1] = {"b", 0.5, 0, 0};
    auto state = BlendState::create(2);
    const auto counts = next_batch_composition(state, specs, 2);
    CHECK(counts == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("a single dataset takes the whole batch") {
    std::vector<DatasetSpec> specs(1);
    specs[0] = {"only", 1.0, 0, 0};
    auto state = BlendState::create(1);
    const auto counts = next_batch_composition(state, specs, 1920);
    CHECK(counts == std::vector<std::uint64_t>{1920});
}

TEST_CASE("weights that do not sum to one are rejected") {
    std::vector<DatasetSpec> specs(2);
    specs[0] = {"a", 0.5, 0, 0};
    specs[1] = {"b", 0.6, 0, 0};
    auto state = BlendState::create(2);
    CHECK_THROWS_AS(next_batch_composition(state, specs, 8), ConfigError);
}

TEST_CASE("fifteen-way mix holds every deviation below one sample") {
    const auto specs = fifteen_dataset_mix();
    auto state = BlendState::create(specs.size());
    const std::uint64_t batch = 1920;
    const int steps = 10000;
    for (int step = 0; step < steps; ++step) {
        const auto counts = next_batch_composition(state, specs, batch);
        const std::uint64_t total = std::accumulate(
            counts.begin(), counts.end(), std::uint64_t{0});
        REQUIRE(total == batch);
        const double drawn_total = static_cast<double>(batch) * (step + 1);
        for (std::size_t i = 0; i < specs.size(); ++i) {
            const double deviation =
                specs[i].weight * drawn_total -
                static_cast<double>(state.drawn[i]);
            REQUIRE(std::abs(deviation) < 1.0);
            // state.credit tracks the same value.
            REQUIRE(std::abs(state.credit[i] - deviation) < 1e-6);
        }
    }
}

TEST_CASE("the count stream is deterministic") {
    const auto specs = fifteen_dataset_mix();
    auto state_a = BlendState::create(specs.size());
    auto state_b = BlendState::create(specs.size());
    for (int step = 0; step < 200; ++step) {
        CHECK(next_batch_composition(state_a, specs, 96) ==
              next_batch_composition(state_b, specs, 96));
    }
}

TEST_CASE("remainder ties break by spec order") {
    // Four datasets at 0.25 with batch 2: quotas are all 0.5, so the first
    // two specs win the remainders on step one.
    std::vector<DatasetSpec> specs(4);
    specs[0] = {"a", 0.25, 0, 0};
    specs[1] = {"b", 0.25, 0, 0};
    specs[2] = {"c", 0.25, 0, 0};
    specs[3] = {"d", 0.25, 0, 0};
    auto state = BlendState::create(4);
    const auto first = next_batch_composition(state, specs, 2);
    CHECK(first == std::vector<std::uint64_t>{1, 1, 0, 0});
    // Carried credit flips the next batch to the starved pair.
    const auto second = next_batch_composition(state, specs, 2);
    CHECK(second == std::vector<std::uint64_t>{0, 0, 1, 1});
}

TEST_CASE("epoch accounting divides draws by availability") {
    std::vector<DatasetSpec> specs(2);
    specs[0] = {"small", 0.5, 100, 0};
    specs[1] = {"large", 0.5, 1000, 0};
    auto state = BlendState::create(2);
    for (int step = 0; step < 100; ++step) {
        next_batch_composition(state, specs, 10);
    }
    // 500 draws each: 5 epochs of the small set, 0.5 of the large.
    CHECK(static_cast<double>(state.drawn[0]) / specs[0].tokens_available ==
          doctest::Approx(5.0));
    CHECK(static_cast<double>(state.drawn[1]) / specs[1].tokens_available ==
          doctest::Approx(0.5));
}

TEST_CASE("conservation holds for adversarial weight vectors") {
    std::vector<DatasetSpec> specs(3);
    specs[0] = {"x", 1.0 / 3.0, 0, 0};
    specs[1] = {"y", 1.0 / 3.0, 0, 0};
    specs[2] = {"z", 1.0 - 2.0 / 3.0, 0, 0};
    auto state = BlendState::create(3);
    for (int step = 0; step < 1000; ++step) {
        const auto counts = next_batch_composition(state, specs, 7);
        CHECK(std::accumulate(counts.begin(), counts.end(),
                              std::uint64_t{0}) == 7);
        for (double c : state.credit) CHECK(std::abs(c) < 1.0);
    }
}
