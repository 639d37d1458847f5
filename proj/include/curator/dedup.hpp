#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "curator/features.hpp"
#include "curator/minhash.hpp"

namespace curator {

struct DuplicatePair {
    std::uint64_t duplicate_id = 0;
    std::uint64_t anchor_id = 0;
    double similarity = 0.0;

    bool operator==(const DuplicatePair&) const = default;
};

// Approximate all-pairs similarity inside one LSH bucket: up to
// params.sample_iterations rounds of seeded-uniformly sampling an anchor,
// measuring it against everything remaining, and removing the anchor plus
// everything at or above the threshold. Deterministic per
// (rng_seed, bucket contents). Similarity is exact Jaccard over feature
// sets unless params.signature_similarity is set.
std::vector<DuplicatePair> dedup_bucket(
    const std::vector<std::uint64_t>& bucket,
    const std::unordered_map<std::uint64_t, FeatureSet>& features,
    const LshParams& params,
    const std::unordered_map<std::uint64_t, MinHashSignature>* signatures =
        nullptr);

// Dataset priority for representative selection, best first. Must cover
// every dataset present in the corpus.
struct PriorityOrder {
    std::vector<std::string> datasets;

    // Rank of a dataset, 0 best; -1 when absent.
    int rank_of(const std::string& dataset) const;
};

struct DuplicateComponent {
    std::uint64_t representative = 0;
    std::string representative_dataset;
    std::vector<std::uint64_t> members;  // sorted, includes representative
};

struct DuplicateGraph {
    std::vector<DuplicatePair> edges;  // unique, sorted by (min id, max id)
    std::vector<DuplicateComponent> components;
    std::unordered_map<std::uint64_t, std::uint64_t> representative_of;

    bool is_duplicate(std::uint64_t doc_id) const {
        const auto it = representative_of.find(doc_id);
        return it != representative_of.end() && it->second != doc_id;
    }
};

// Union-find over the pairs, then per component the representative is the
// member from the highest-priority dataset, ties broken by smallest doc_id.
// doc_dataset must cover every doc in the corpus; docs without edges become
// singleton components. Throws DataError when a dataset is missing from the
// priority order.
DuplicateGraph resolve_components(
    std::vector<DuplicatePair> pairs, const PriorityOrder& priority,
    const std::map<std::uint64_t, std::string>& doc_dataset);

}  // namespace curator
