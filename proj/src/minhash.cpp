#include "curator/minhash.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "curator/hashing.hpp"

namespace curator {

void LshParams::validate() const {
    if (bands < 1 || rows < 1)
        throw std::invalid_argument("bands and rows must be >= 1");
    if (!(jaccard_threshold > 0.0 && jaccard_threshold <= 1.0))
        throw std::invalid_argument("jaccard_threshold must be in (0,1]");
    if (sample_iterations < 1)
        throw std::invalid_argument("sample_iterations must be >= 1");
}

MinHashSignature minhash_signature(const FeatureSet& features,
                                   const LshParams& params) {
    if (features.empty())
        throw std::invalid_argument(
            "minhash_signature: empty feature set (document should have been "
            "dropped by length rules)");
    const int n = params.signature_length();
    MinHashSignature sig;
    sig.slots.assign(static_cast<std::size_t>(n),
                     std::numeric_limits<std::uint64_t>::max());
    for (int k = 0; k < n; ++k) {
        const std::uint64_t slot_seed =
            mix64(params.rng_seed, static_cast<std::uint64_t>(k));
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (std::uint32_t id : features.ids) {
            const std::uint64_t h = mix64(slot_seed, id);
            if (h < best) best = h;
        }
        sig.slots[static_cast<std::size_t>(k)] = best;
    }
    return sig;
}

double estimate_jaccard(const MinHashSignature& a, const MinHashSignature& b) {
    if (a.slots.size() != b.slots.size())
        throw std::invalid_argument("signature length mismatch");
    if (a.slots.empty()) return 0.0;
    std::size_t match = 0;
    for (std::size_t i = 0; i < a.slots.size(); ++i) {
        if (a.slots[i] == b.slots[i]) ++match;
    }
    return static_cast<double>(match) / static_cast<double>(a.slots.size());
}

double collision_probability(double s, const LshParams& params) {
    return 1.0 - std::pow(1.0 - std::pow(s, params.rows), params.bands);
}

std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> lsh_group(
    const std::map<std::uint64_t, MinHashSignature>& signatures,
    const LshParams& params) {
    const std::size_t rows = static_cast<std::size_t>(params.rows);
    std::unordered_map<std::uint64_t, std::vector<std::uint64_t>> buckets;
    for (const auto& [doc_id, sig] : signatures) {
        if (sig.slots.size() !=
            static_cast<std::size_t>(params.signature_length()))
            throw std::invalid_argument("signature length mismatch");
        for (int b = 0; b < params.bands; ++b) {
            std::uint64_t h = kFnvOffsetBasis;
            h = fnv1a64_u32(static_cast<std::uint32_t>(b), h);
            h = fnv1a64_u32(static_cast<std::uint32_t>(rows), h);
            for (std::size_t r = 0; r < rows; ++r) {
                h = fnv1a64_u64(sig.slots[static_cast<std::size_t>(b) * rows + r], h);
            }
            buckets[h].push_back(doc_id);
        }
    }
    return buckets;
}

}  // namespace curator
