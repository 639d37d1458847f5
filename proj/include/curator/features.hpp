#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace curator {

inline constexpr std::uint32_t kFeatureSpace = 1u << 20;  // 1,048,576

// A token is a maximal run of word characters (ASCII alphanumerics plus any
// code point above U+007F), ASCII-lowercased. Offsets are code-point indices
// into the original text, half-open.
struct Token {
    std::string norm;
    std::size_t begin_cp = 0;
    std::size_t end_cp = 0;
};

std::vector<Token> tokenize(std::string_view text);

// Sorted, de-duplicated feature ids in [0, kFeatureSpace).
struct FeatureSet {
    std::vector<std::uint32_t> ids;

    bool empty() const { return ids.empty(); }
    std::size_t size() const { return ids.size(); }
    bool operator==(const FeatureSet&) const = default;
};

// Word-presence hashing vectorizer: FNV-1a of each token's UTF-8 bytes,
// modulo the feature space.
FeatureSet vectorize(std::string_view text);

// |a ∩ b| / |a ∪ b|; 0 when both are empty.
double exact_jaccard(const FeatureSet& a, const FeatureSet& b);

}  // namespace curator
