#include "curator/utf8.hpp"

namespace curator {

namespace {

// Decodes one code point starting at s[i]. Returns false on malformed input.
bool decode_one(std::string_view s, std::size_t& i, char32_t& cp) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        cp = b0;
        i += 1;
        return true;
    }
    int len;
    char32_t min_cp;
    if ((b0 & 0xe0) == 0xc0) {
        len = 2;
        cp = b0 & 0x1f;
        min_cp = 0x80;
    } else if ((b0 & 0xf0) == 0xe0) {
        len = 3;
        cp = b0 & 0x0f;
        min_cp = 0x800;
    } else if ((b0 & 0xf8) == 0xf0) {
        len = 4;
        cp = b0 & 0x07;
        min_cp = 0x10000;
    } else {
        return false;
    }
    if (i + len > s.size()) return false;
    for (int k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xc0) != 0x80) return false;
        cp = (cp << 6) | (b & 0x3f);
    }
    if (cp < min_cp) return false;                    // overlong
    if (cp >= 0xd800 && cp <= 0xdfff) return false;   // surrogate
    if (cp > 0x10ffff) return false;
    i += len;
    return true;
}

}  // namespace

bool utf8_valid(std::string_view s) {
    std::size_t i = 0;
    char32_t cp;
    while (i < s.size()) {
        if (!decode_one(s, i, cp)) return false;
    }
    return true;
}

std::size_t code_point_count(std::string_view s) {
    std::size_t n = 0;
    for (char c : s) {
        if ((static_cast<unsigned char>(c) & 0xc0) != 0x80) ++n;
    }
    return n;
}

void append_code_point(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
}

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    char32_t cp;
    while (i < s.size()) {
        if (!decode_one(s, i, cp)) {
            // Caller is expected to have validated; keep total by mapping
            // stray bytes to U+FFFD.
            cp = 0xfffd;
            ++i;
        }
        out.push_back(cp);
    }
    return out;
}

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) append_code_point(out, cp);
    return out;
}

std::string substr_code_points(std::string_view s, std::size_t first,
                               std::size_t last) {
    std::size_t n = 0, byte_first = s.size(), byte_last = s.size();
    for (std::size_t i = 0; i <= s.size(); ++i) {
        const bool boundary =
            i == s.size() ||
            (static_cast<unsigned char>(s[i]) & 0xc0) != 0x80;
        if (!boundary) continue;
        if (n == first && byte_first == s.size()) byte_first = i;
        if (n == last) {
            byte_last = i;
            break;
        }
        ++n;
    }
    if (byte_first >= byte_last) return {};
    return std::string(s.substr(byte_first, byte_last - byte_first));
}

}  // namespace curator
