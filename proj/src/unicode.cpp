#include "bioprep/unicode.hpp"

#include <algorithm>
#include <array>

namespace bioprep::uni {

char32_t decode(std::string_view s, std::size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kReplacement;
    }
    if (i + len > s.size()) {
        ++i;
        return kReplacement;
    }
    for (int k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kReplacement;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong forms and surrogates.
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return kReplacement;
    }
    i += len;
    return cp;
}

void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::vector<char32_t> decode_all(std::string_view s) {
    std::vector<char32_t> cps;
    cps.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) cps.push_back(decode(s, i));
    return cps;
}

std::string encode_all(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps) encode(cp, out);
    return out;
}

bool is_whitespace(char32_t cp) {
    switch (cp) {
        case ' ': case '\t': case '\n': case '\r': case '\f': case 0x0B:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_control(char32_t cp) {
    if (cp == '\t' || cp == '\n' || cp == '\r') return false;
    return cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp <= 0x9F) ||
           cp == 0x200B || cp == 0x200C || cp == 0x200D || cp == 0xFEFF;
}

bool is_punctuation(char32_t cp) {
    // ASCII: everything printable that is neither alphanumeric nor space,
    // matching the usual BERT treatment ('$', '^', '`' etc. included).
    if ((cp >= 33 && cp <= 47) || (cp >= 58 && cp <= 64) ||
        (cp >= 91 && cp <= 96) || (cp >= 123 && cp <= 126))
        return true;
    if ((cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E))
        return true;  // general punctuation
    if (cp >= 0x3001 && cp <= 0x303F) return true;  // CJK punctuation
    switch (cp) {
        case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB:
        case 0xBF: case 0xFF01: case 0xFF0C: case 0xFF0E: case 0xFF1A:
        case 0xFF1B: case 0xFF1F:
            return true;
        default:
            return false;
    }
}

bool is_cjk(char32_t cp) {
    return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
           (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x20000 && cp <= 0x2A6DF) ||
           (cp >= 0x2A700 && cp <= 0x2CEAF) || (cp >= 0x2F800 && cp <= 0x2FA1F);
}

bool is_digit(char32_t cp) { return cp >= '0' && cp <= '9'; }

bool is_upper(char32_t cp) { return to_lower(cp) != cp; }

bool is_combining_mark(char32_t cp) {
    return (cp >= 0x0300 && cp <= 0x036F) || (cp >= 0x1AB0 && cp <= 0x1AFF) ||
           (cp >= 0x1DC0 && cp <= 0x1DFF) || (cp >= 0x20D0 && cp <= 0x20FF);
}

namespace {

struct Map {
    std::uint16_t from;
    std::uint16_t to;
};

// Generated from the Unicode data for U+00C0..U+017F.
constexpr std::array<Map, 92> kLower = {{
    {0xC0, 0xE0}, {0xC1, 0xE1}, {0xC2, 0xE2}, {0xC3, 0xE3}, {0xC4, 0xE4},
    {0xC5, 0xE5}, {0xC6, 0xE6}, {0xC7, 0xE7}, {0xC8, 0xE8}, {0xC9, 0xE9},
    {0xCA, 0xEA}, {0xCB, 0xEB}, {0xCC, 0xEC}, {0xCD, 0xED}, {0xCE, 0xEE},
    {0xCF, 0xEF}, {0xD0, 0xF0}, {0xD1, 0xF1}, {0xD2, 0xF2}, {0xD3, 0xF3},
    {0xD4, 0xF4}, {0xD5, 0xF5}, {0xD6, 0xF6}, {0xD8, 0xF8}, {0xD9, 0xF9},
    {0xDA, 0xFA}, {0xDB, 0xFB}, {0xDC, 0xFC}, {0xDD, 0xFD}, {0xDE, 0xFE},
    {0x100, 0x101}, {0x102, 0x103}, {0x104, 0x105}, {0x106, 0x107},
    {0x108, 0x109}, {0x10A, 0x10B}, {0x10C, 0x10D}, {0x10E, 0x10F},
    {0x110, 0x111}, {0x112, 0x113}, {0x114, 0x115}, {0x116, 0x117},
    {0x118, 0x119}, {0x11A, 0x11B}, {0x11C, 0x11D}, {0x11E, 0x11F},
    {0x120, 0x121}, {0x122, 0x123}, {0x124, 0x125}, {0x126, 0x127},
    {0x128, 0x129}, {0x12A, 0x12B}, {0x12C, 0x12D}, {0x12E, 0x12F},
    {0x132, 0x133}, {0x134, 0x135}, {0x136, 0x137}, {0x139, 0x13A},
    {0x13B, 0x13C}, {0x13D, 0x13E}, {0x13F, 0x140}, {0x141, 0x142},
    {0x143, 0x144}, {0x145, 0x146}, {0x147, 0x148}, {0x14A, 0x14B},
    {0x14C, 0x14D}, {0x14E, 0x14F}, {0x150, 0x151}, {0x152, 0x153},
    {0x154, 0x155}, {0x156, 0x157}, {0x158, 0x159}, {0x15A, 0x15B},
    {0x15C, 0x15D}, {0x15E, 0x15F}, {0x160, 0x161}, {0x162, 0x163},
    {0x164, 0x165}, {0x166, 0x167}, {0x168, 0x169}, {0x16A, 0x16B},
    {0x16C, 0x16D}, {0x16E, 0x16F}, {0x170, 0x171}, {0x172, 0x173},
    {0x174, 0x175}, {0x176, 0x177}, {0x178, 0xFF}, {0x179, 0x17A},
    {0x17B, 0x17C}, {0x17D, 0x17E},
}};

constexpr std::array<Map, 161> kStrip = {{
    {0xC0, 0x41}, {0xC1, 0x41}, {0xC2, 0x41}, {0xC3, 0x41}, {0xC4, 0x41},
    {0xC5, 0x41}, {0xC7, 0x43}, {0xC8, 0x45}, {0xC9, 0x45}, {0xCA, 0x45},
    {0xCB, 0x45}, {0xCC, 0x49}, {0xCD, 0x49}, {0xCE, 0x49}, {0xCF, 0x49},
    {0xD1, 0x4E}, {0xD2, 0x4F}, {0xD3, 0x4F}, {0xD4, 0x4F}, {0xD5, 0x4F},
    {0xD6, 0x4F}, {0xD9, 0x55}, {0xDA, 0x55}, {0xDB, 0x55}, {0xDC, 0x55},
    {0xDD, 0x59}, {0xE0, 0x61}, {0xE1, 0x61}, {0xE2, 0x61}, {0xE3, 0x61},
    {0xE4, 0x61}, {0xE5, 0x61}, {0xE7, 0x63}, {0xE8, 0x65}, {0xE9, 0x65},
    {0xEA, 0x65}, {0xEB, 0x65}, {0xEC, 0x69}, {0xED, 0x69}, {0xEE, 0x69},
    {0xEF, 0x69}, {0xF1, 0x6E}, {0xF2, 0x6F}, {0xF3, 0x6F}, {0xF4, 0x6F},
    {0xF5, 0x6F}, {0xF6, 0x6F}, {0xF9, 0x75}, {0xFA, 0x75}, {0xFB, 0x75},
    {0xFC, 0x75}, {0xFD, 0x79}, {0xFF, 0x79}, {0x100, 0x41}, {0x101, 0x61},
    {0x102, 0x41}, {0x103, 0x61}, {0x104, 0x41}, {0x105, 0x61},
    {0x106, 0x43}, {0x107, 0x63}, {0x108, 0x43}, {0x109, 0x63},
    {0x10A, 0x43}, {0x10B, 0x63}, {0x10C, 0x43}, {0x10D, 0x63},
    {0x10E, 0x44}, {0x10F, 0x64}, {0x112, 0x45}, {0x113, 0x65},
    {0x114, 0x45}, {0x115, 0x65}, {0x116, 0x45}, {0x117, 0x65},
    {0x118, 0x45}, {0x119, 0x65}, {0x11A, 0x45}, {0x11B, 0x65},
    {0x11C, 0x47}, {0x11D, 0x67}, {0x11E, 0x47}, {0x11F, 0x67},
    {0x120, 0x47}, {0x121, 0x67}, {0x122, 0x47}, {0x123, 0x67},
    {0x124, 0x48}, {0x125, 0x68}, {0x128, 0x49}, {0x129, 0x69},
    {0x12A, 0x49}, {0x12B, 0x69}, {0x12C, 0x49}, {0x12D, 0x69},
    {0x12E, 0x49}, {0x12F, 0x69}, {0x130, 0x49}, {0x134, 0x4A},
    {0x135, 0x6A}, {0x136, 0x4B}, {0x137, 0x6B}, {0x139, 0x4C},
    {0x13A, 0x6C}, {0x13B, 0x4C}, {0x13C, 0x6C}, {0x13D, 0x4C},
    {0x13E, 0x6C}, {0x143, 0x4E}, {0x144, 0x6E}, {0x145, 0x4E},
    {0x146, 0x6E}, {0x147, 0x4E}, {0x148, 0x6E}, {0x14C, 0x4F},
    {0x14D, 0x6F}, {0x14E, 0x4F}, {0x14F, 0x6F}, {0x150, 0x4F},
    {0x151, 0x6F}, {0x154, 0x52}, {0x155, 0x72}, {0x156, 0x52},
    {0x157, 0x72}, {0x158, 0x52}, {0x159, 0x72}, {0x15A, 0x53},
    {0x15B, 0x73}, {0x15C, 0x53}, {0x15D, 0x73}, {0x15E, 0x53},
    {0x15F, 0x73}, {0x160, 0x53}, {0x161, 0x73}, {0x162, 0x54},
    {0x163, 0x74}, {0x164, 0x54}, {0x165, 0x74}, {0x168, 0x55},
    {0x169, 0x75}, {0x16A, 0x55}, {0x16B, 0x75}, {0x16C, 0x55},
    {0x16D, 0x75}, {0x16E, 0x55}, {0x16F, 0x75}, {0x170, 0x55},
    {0x171, 0x75}, {0x172, 0x55}, {0x173, 0x75}, {0x174, 0x57},
    {0x175, 0x77}, {0x176, 0x59}, {0x177, 0x79}, {0x178, 0x59},
    {0x179, 0x5A}, {0x17A, 0x7A}, {0x17B, 0x5A}, {0x17C, 0x7A},
    {0x17D, 0x5A}, {0x17E, 0x7A},
}};

template <std::size_t N>
char32_t lookup(const std::array<Map, N>& table, char32_t cp,
                char32_t fallback) {
    auto it = std::lower_bound(
        table.begin(), table.end(), cp,
        [](const Map& m, char32_t c) { return m.from < c; });
    if (it != table.end() && it->from == cp) return it->to;
    return fallback;
}

}  // namespace

char32_t to_lower(char32_t cp) {
    if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 0x20 : cp;
    if (cp > 0x17F) return cp;
    return lookup(kLower, cp, cp);
}

char32_t strip_accent(char32_t cp) {
    if (is_combining_mark(cp)) return 0;
    if (cp < 0xC0 || cp > 0x17F) return cp;
    return lookup(kStrip, cp, cp);
}

}  // namespace bioprep::uni
