#include "curator/dedup.hpp"

#include <algorithm>
#include <stdexcept>

#include "curator/errors.hpp"
#include "curator/hashing.hpp"
#include "curator/union_find.hpp"

namespace curator {

namespace {

std::uint64_t bucket_stream_seed(const std::vector<std::uint64_t>& sorted_ids,
                                 std::uint64_t rng_seed) {
    std::uint64_t h = kFnvOffsetBasis;
    for (std::uint64_t id : sorted_ids) h = fnv1a64_u64(id, h);
    return mix64(rng_seed, h);
}

}  // namespace

std::vector<DuplicatePair> dedup_bucket(
    const std::vector<std::uint64_t>& bucket,
    const std::unordered_map<std::uint64_t, FeatureSet>& features,
    const LshParams& params,
    const std::unordered_map<std::uint64_t, MinHashSignature>* signatures) {
    std::vector<DuplicatePair> out;
    if (bucket.size() <= 1) return out;

    std::vector<std::uint64_t> pool = bucket;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    if (params.signature_similarity && signatures == nullptr)
        throw std::invalid_argument(
            "signature_similarity requires signatures");

    const auto similarity = [&](std::uint64_t a, std::uint64_t b) {
        if (params.signature_similarity) {
            return estimate_jaccard(signatures->at(a), signatures->at(b));
        }
        return exact_jaccard(features.at(a), features.at(b));
    };

    const std::uint64_t seed = bucket_stream_seed(pool, params.rng_seed);
    for (int iter = 0; iter < params.sample_iterations; ++iter) {
        if (pool.size() <= 1) break;
        const std::size_t idx = static_cast<std::size_t>(
            mix64(seed, static_cast<std::uint64_t>(iter)) % pool.size());
        const std::uint64_t anchor = pool[idx];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(idx));

        std::vector<std::uint64_t> remaining;
        remaining.reserve(pool.size());
        for (std::uint64_t other : pool) {
            const double sim = similarity(anchor, other);
            if (sim >= params.jaccard_threshold) {
                out.push_back({other, anchor, sim});
            } else {
                remaining.push_back(other);
            }
        }
        pool = std::move(remaining);
    }
    return out;
}

int PriorityOrder::rank_of(const std::string& dataset) const {
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        if (datasets[i] == dataset) return static_cast<int>(i);
    }
    return -1;
}

DuplicateGraph resolve_components(
    std::vector<DuplicatePair> pairs, const PriorityOrder& priority,
    const std::map<std::uint64_t, std::string>& doc_dataset) {
    // Edge identity is the unordered pair; sort by (min, max) and de-dup so
    // parallel bucket processing cannot change the result.
    std::sort(pairs.begin(), pairs.end(),
              [](const DuplicatePair& a, const DuplicatePair& b) {
                  const auto ka = std::minmax(a.duplicate_id, a.anchor_id);
                  const auto kb = std::minmax(b.duplicate_id, b.anchor_id);
                  if (ka != kb) return ka < kb;
                  return a.similarity > b.similarity;
              });
    pairs.erase(std::unique(pairs.begin(), pairs.end(),
                            [](const DuplicatePair& a, const DuplicatePair& b) {
                                return std::minmax(a.duplicate_id,
                                                   a.anchor_id) ==
                                       std::minmax(b.duplicate_id,
                                                   b.anchor_id);
                            }),
                pairs.end());

    // Dense index over the corpus universe.
    std::unordered_map<std::uint64_t, std::size_t> index;
    std::vector<std::uint64_t> ids;
    ids.reserve(doc_dataset.size());
    index.reserve(doc_dataset.size());
    for (const auto& [id, dataset] : doc_dataset) {
        if (priority.rank_of(dataset) < 0)
            throw DataError("dataset \"" + dataset +
                            "\" missing from priority order");
        index.emplace(id, ids.size());
        ids.push_back(id);
    }
    const auto index_of = [&](std::uint64_t id) {
        const auto it = index.find(id);
        if (it == index.end())
            throw DataError("doc " + std::to_string(id) +
                            " appears in duplicate pairs but not in the "
                            "corpus metadata");
        return it->second;
    };

    UnionFind uf(ids.size());
    for (const auto& p : pairs) {
        uf.unite(index_of(p.duplicate_id), index_of(p.anchor_id));
    }

    // Group members by root; ids is sorted, so members come out sorted and
    // component order follows each component's smallest doc id.
    std::unordered_map<std::size_t, std::vector<std::uint64_t>> groups;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        groups[uf.find(i)].push_back(ids[i]);
    }

    DuplicateGraph graph;
    graph.edges = std::move(pairs);
    graph.components.reserve(groups.size());
    std::vector<std::size_t> roots;
    roots.reserve(groups.size());
    for (const auto& [root, members] : groups) roots.push_back(root);
    std::sort(roots.begin(), roots.end(),
              [&](std::size_t a, std::size_t b) {
                  return groups.at(a).front() < groups.at(b).front();
              });

    for (std::size_t root : roots) {
        auto& members = groups.at(root);
        DuplicateComponent comp;
        comp.members = std::move(members);
        std::uint64_t best_id = comp.members.front();
        int best_rank = priority.rank_of(doc_dataset.at(best_id));
        for (std::uint64_t id : comp.members) {
            const int rank = priority.rank_of(doc_dataset.at(id));
            if (rank < best_rank ||
                (rank == best_rank && id < best_id)) {
                best_rank = rank;
                best_id = id;
            }
        }
        comp.representative = best_id;
        comp.representative_dataset = doc_dataset.at(best_id);
        for (std::uint64_t id : comp.members) {
            graph.representative_of.emplace(id, best_id);
        }
        graph.components.push_back(std::move(comp));
    }
    return graph;
}

}  // namespace curator
