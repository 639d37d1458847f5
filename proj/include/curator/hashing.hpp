#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

// Fixed hashing primitives shared by every module. All constants are the
// published FNV-1a 64 and splitmix64 constants; outputs are byte-level
// deterministic across platforms (inputs are hashed as little-endian bytes).

namespace curator {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = kFnvOffsetBasis) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= kFnvPrime;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::string_view s,
                             std::uint64_t h = kFnvOffsetBasis) {
    return fnv1a64(s.data(), s.size(), h);
}

// Chainable little-endian integer feed, used for band keys and length
// prefixes.
inline std::uint64_t fnv1a64_u32(std::uint32_t v, std::uint64_t h) {
    unsigned char b[4];
    std::memcpy(b, &v, 4);
    return fnv1a64(b, 4, h);
}

inline std::uint64_t fnv1a64_u64(std::uint64_t v, std::uint64_t h) {
    unsigned char b[8];
    std::memcpy(b, &v, 8);
    return fnv1a64(b, 8, h);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Two-input mixer; the basis of every counter-based random stream in the
// pipeline (per-document Pareto draws, per-slot MinHash permutations,
// per-stage seed derivation).
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b));
}

// Maps 64 random bits onto the open interval (0,1). Never returns 0 or 1,
// so draws derived from it are strictly positive.
inline double uniform_unit(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace curator
