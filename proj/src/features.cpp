#include "curator/features.hpp"

#include <algorithm>

#include "curator/hashing.hpp"
#include "curator/utf8.hpp"

namespace curator {

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    std::string current;
    std::size_t cp_index = 0;
    std::size_t token_start = 0;

    std::size_t i = 0;
    while (i < text.size()) {
        // Decode one code point (input validated upstream).
        const auto b0 = static_cast<unsigned char>(text[i]);
        char32_t cp = b0;
        std::size_t len = 1;
        if (b0 >= 0xf0) len = 4;
        else if (b0 >= 0xe0) len = 3;
        else if (b0 >= 0xc0) len = 2;
        if (len > 1 && i + len <= text.size()) {
            cp = b0 & (0x7f >> len);
            for (std::size_t k = 1; k < len; ++k) {
                cp = (cp << 6) |
                     (static_cast<unsigned char>(text[i + k]) & 0x3f);
            }
        }
        i += len;

        char32_t c = cp;
        if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
        const bool wordish =
            (c >= U'a' && c <= U'z') || (c >= U'0' && c <= U'9') || c >= 0x80;
        if (wordish) {
            if (current.empty()) token_start = cp_index;
            append_code_point(current, c);
        } else if (!current.empty()) {
            tokens.push_back({std::move(current), token_start, cp_index});
            current.clear();
        }
        ++cp_index;
    }
    if (!current.empty()) {
        tokens.push_back({std::move(current), token_start, cp_index});
    }
    return tokens;
}

FeatureSet vectorize(std::string_view text) {
    FeatureSet set;
    for (const auto& tok : tokenize(text)) {
        set.ids.push_back(
            static_cast<std::uint32_t>(fnv1a64(tok.norm) % kFeatureSpace));
    }
    std::sort(set.ids.begin(), set.ids.end());
    set.ids.erase(std::unique(set.ids.begin(), set.ids.end()), set.ids.end());
    return set;
}

double exact_jaccard(const FeatureSet& a, const FeatureSet& b) {
    if (a.ids.empty() && b.ids.empty()) return 0.0;
    std::size_t inter = 0;
    std::size_t i = 0, j = 0;
    while (i < a.ids.size() && j < b.ids.size()) {
        if (a.ids[i] == b.ids[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (a.ids[i] < b.ids[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = a.ids.size() + b.ids.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace curator
