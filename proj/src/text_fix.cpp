#include "curator/text_fix.hpp"

#include <array>
#include <unordered_map>

#include "curator/utf8.hpp"

namespace curator {

namespace {

// Byte value a code point round-trips to under cp1252 (latin-1 plus the
// 0x80-0x9F printable extras). -1 when the code point maps to no byte.
int code_point_to_byte(char32_t cp) {
    if (cp < 0x100) return static_cast<int>(cp);
    switch (cp) {
        case 0x20ac: return 0x80;
        case 0x201a: return 0x82;
        case 0x0192: return 0x83;
        case 0x201e: return 0x84;
        case 0x2026: return 0x85;
        case 0x2020: return 0x86;
        case 0x2021: return 0x87;
        case 0x02c6: return 0x88;
        case 0x2030: return 0x89;
        case 0x0160: return 0x8a;
        case 0x2039: return 0x8b;
        case 0x0152: return 0x8c;
        case 0x017d: return 0x8e;
        case 0x2018: return 0x91;
        case 0x2019: return 0x92;
        case 0x201c: return 0x93;
        case 0x201d: return 0x94;
        case 0x2022: return 0x95;
        case 0x2013: return 0x96;
        case 0x2014: return 0x97;
        case 0x02dc: return 0x98;
        case 0x2122: return 0x99;
        case 0x0161: return 0x9a;
        case 0x203a: return 0x9b;
        case 0x0153: return 0x9c;
        case 0x017e: return 0x9e;
        case 0x0178: return 0x9f;
        default: return -1;
    }
}

bool decode_utf8_bytes(const unsigned char* b, int len, char32_t& cp) {
    char32_t v;
    char32_t min_cp;
    if (len == 2) {
        if ((b[0] & 0xe0) != 0xc0) return false;
        v = b[0] & 0x1f;
        min_cp = 0x80;
    } else if (len == 3) {
        if ((b[0] & 0xf0) != 0xe0) return false;
        v = b[0] & 0x0f;
        min_cp = 0x800;
    } else if (len == 4) {
        if ((b[0] & 0xf8) != 0xf0) return false;
        v = b[0] & 0x07;
        min_cp = 0x10000;
    } else {
        return false;
    }
    for (int i = 1; i < len; ++i) {
        if ((b[i] & 0xc0) != 0x80) return false;
        v = (v << 6) | (b[i] & 0x3f);
    }
    if (v < min_cp || (v >= 0xd800 && v <= 0xdfff) || v > 0x10ffff)
        return false;
    cp = v;
    return true;
}

// One left-to-right repair pass over the code points. Returns true if
// anything changed.
bool repair_pass(const std::u32string& in, std::u32string& out) {
    bool changed = false;
    std::size_t i = 0;
    while (i < in.size()) {
        const int b0 = code_point_to_byte(in[i]);
        int need = 0;
        if (b0 >= 0xc2 && b0 <= 0xdf) need = 1;
        else if (b0 >= 0xe0 && b0 <= 0xef) need = 2;
        else if (b0 >= 0xf0 && b0 <= 0xf4) need = 3;
        if (need > 0 && i + need < in.size()) {
            std::array<unsigned char, 4> bytes{};
            bytes[0] = static_cast<unsigned char>(b0);
            bool ok = true;
            for (int k = 1; k <= need; ++k) {
                const int bk = code_point_to_byte(in[i + k]);
                if (bk < 0x80 || bk > 0xbf) {
                    ok = false;
                    break;
                }
                bytes[k] = static_cast<unsigned char>(bk);
            }
            char32_t repaired;
            if (ok && decode_utf8_bytes(bytes.data(), need + 1, repaired)) {
                out.push_back(repaired);
                i += need + 1;
                changed = true;
                continue;
            }
        }
        out.push_back(in[i]);
        ++i;
    }
    return changed;
}

// Latin composition table: (base << 21 | combining mark) -> precomposed.
const std::unordered_map<std::uint64_t, char32_t>& composition_table() {
    static const auto* table = [] {
        auto* t = new std::unordered_map<std::uint64_t, char32_t>;
        auto put = [&](char32_t base, char32_t mark, char32_t composed) {
            (*t)[(static_cast<std::uint64_t>(base) << 21) | mark] = composed;
        };
        struct Row {
            char32_t mark;
            const char* bases;
            const char32_t* composed;
        };
        // grave
        static const char32_t g[] = {0xc0, 0xc8, 0xcc, 0xd2, 0xd9,
                                     0xe0, 0xe8, 0xec, 0xf2, 0xf9};
        // acute
        static const char32_t a[] = {0xc1, 0x106, 0xc9, 0xcd, 0x143, 0xd3,
                                     0x15a, 0xda, 0xdd, 0x179, 0xe1, 0x107,
                                     0xe9, 0xed, 0x144, 0xf3, 0x15b, 0xfa,
                                     0xfd, 0x17a};
        // circumflex
        static const char32_t c[] = {0xc2, 0xca, 0xce, 0xd4, 0xdb,
                                     0xe2, 0xea, 0xee, 0xf4, 0xfb};
        // tilde
        static const char32_t tl[] = {0xc3, 0xd1, 0xd5, 0xe3, 0xf1, 0xf5};
        // diaeresis
        static const char32_t d[] = {0xc4, 0xcb, 0xcf, 0xd6, 0xdc, 0x178,
                                     0xe4, 0xeb, 0xef, 0xf6, 0xfc, 0xff};
        // ring above
        static const char32_t r[] = {0xc5, 0xe5};
        // cedilla
        static const char32_t cd[] = {0xc7, 0x15e, 0xe7, 0x15f};
        // caron
        static const char32_t cr[] = {0x10c, 0x160, 0x17d, 0x10d, 0x161,
                                      0x17e};
        static const Row rows[] = {
            {0x0300, "AEIOUaeiou", g},
            {0x0301, "ACEINOSUYZaceinosuyz", a},
            {0x0302, "AEIOUaeiou", c},
            {0x0303, "ANOano", tl},
            {0x0308, "AEIOUYaeiouy", d},
            {0x030a, "Aa", r},
            {0x0327, "CScs", cd},
            {0x030c, "CSZcsz", cr},
        };
        for (const auto& row : rows) {
            for (std::size_t i = 0; row.bases[i]; ++i) {
                put(static_cast<char32_t>(row.bases[i]), row.mark,
                    row.composed[i]);
            }
        }
        return t;
    }();
    return *table;
}

}  // namespace

std::string repair_mojibake(std::string_view text) {
    std::u32string cur = decode_utf8(text);
    // Doubly mis-encoded text needs one pass per layer; each pass shrinks.
    for (;;) {
        std::u32string next;
        next.reserve(cur.size());
        if (!repair_pass(cur, next)) break;
        cur = std::move(next);
    }
    return encode_utf8(cur);
}

std::string strip_controls(std::string_view text) {
    const std::u32string in = decode_utf8(text);
    std::u32string out;
    out.reserve(in.size());
    for (char32_t cp : in) {
        const bool c0 = cp < 0x20 && cp != 0x0a && cp != 0x09;
        const bool del = cp == 0x7f;
        const bool c1 = cp >= 0x80 && cp <= 0x9f;
        if (c0 || del || c1) continue;
        out.push_back(cp);
    }
    return encode_utf8(out);
}

std::string compose_latin(std::string_view text) {
    const std::u32string in = decode_utf8(text);
    const auto& table = composition_table();
    std::u32string out;
    out.reserve(in.size());
    for (char32_t cp : in) {
        if (!out.empty()) {
            const auto it =
                table.find((static_cast<std::uint64_t>(out.back()) << 21) | cp);
            if (it != table.end()) {
                out.back() = it->second;
                continue;
            }
        }
        out.push_back(cp);
    }
    return encode_utf8(out);
}

std::string fix_text(std::string_view text) {
    std::string cur(text);
    // Rules can expose new work for each other (composition can assemble a
    // repairable lead byte), so iterate the whole table to a fixpoint. Every
    // productive rule application shrinks the code-point count, so this
    // terminates.
    for (;;) {
        std::string next = compose_latin(strip_controls(repair_mojibake(cur)));
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

}  // namespace curator
