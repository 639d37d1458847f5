#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace curator {

// Minimal UTF-8 utilities. Decoding is strict: overlong forms, surrogates
// and out-of-range code points are rejected.

bool utf8_valid(std::string_view s);

// Number of code points; input must be valid UTF-8.
std::size_t code_point_count(std::string_view s);

void append_code_point(std::string& out, char32_t cp);

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);

// Substring by code-point range [first, last), input must be valid UTF-8.
std::string substr_code_points(std::string_view s, std::size_t first,
                               std::size_t last);

}  // namespace curator
