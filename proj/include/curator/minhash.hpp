#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "curator/features.hpp"

namespace curator {

struct LshParams {
    int bands = 20;
    int rows = 13;
    double jaccard_threshold = 0.8;
    int sample_iterations = 11;
    std::uint64_t rng_seed = 0;
    // Bucket-stage similarity: exact Jaccard over feature sets by default,
    // signature estimates when set.
    bool signature_similarity = false;

    int signature_length() const { return bands * rows; }
    void validate() const;  // throws std::invalid_argument
};

// One 64-bit minimum per hash function; length is bands*rows (260 by
// default). Slot k holds min over feature ids of a mixer keyed
// (rng_seed, k), so P(slot match) equals the Jaccard similarity.
struct MinHashSignature {
    std::vector<std::uint64_t> slots;

    bool operator==(const MinHashSignature&) const = default;
};

// Requires a non-empty feature set (documents that empty should have been
// dropped by the length rules upstream).
MinHashSignature minhash_signature(const FeatureSet& features,
                                   const LshParams& params);

// Fraction of matching slots: an unbiased estimator of the true Jaccard.
double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b);

// Probability that two documents with Jaccard similarity s share at least
// one LSH bucket: 1 - (1 - s^rows)^bands.
double collision_probability(double s, const LshParams& params);

// Groups documents by band keys. Key = FNV-1a over (band index, row count,
// row values), length-prefixed little-endian; docs sharing any band key land
// in one bucket. Doc ids within a bucket keep the input map's order.
std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> lsh_group(
    const std::map<std::uint64_t, MinHashSignature>& signatures,
    const LshParams& params);

}  // namespace curator
