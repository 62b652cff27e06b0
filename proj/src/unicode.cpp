#include "streamgen/unicode.hpp"

#include <algorithm>
#include <iterator>

namespace streamgen::unicode {

namespace {

struct CaseMapping {
    char32_t from;
    char32_t to;
};

#include "streamgen/case_table.inc"

char32_t lookup(const CaseMapping* table, std::size_t n, char32_t cp) {
    auto end = table + n;
    auto it = std::lower_bound(table, end, cp,
                               [](const CaseMapping& m, char32_t c) { return m.from < c; });
    if (it != end && it->from == cp) return it->to;
    return cp;
}

// Decodes one codepoint starting at s[i]; advances i. Invalid bytes are
// returned as-is with the high bit flagged so casing leaves them alone.
bool decode(std::string_view s, std::size_t& i, char32_t& cp) {
    unsigned char lead = static_cast<unsigned char>(s[i]);
    int len;
    if (lead < 0x80) len = 1;
    else if ((lead & 0xE0) == 0xC0) len = 2;
    else if ((lead & 0xF0) == 0xE0) len = 3;
    else if ((lead & 0xF8) == 0xF0) len = 4;
    else { cp = lead; ++i; return false; }

    if (i + static_cast<std::size_t>(len) > s.size()) { cp = lead; ++i; return false; }
    char32_t v = lead & (0x7F >> len);
    if (len == 1) v = lead;
    for (int k = 1; k < len; ++k) {
        unsigned char cont = static_cast<unsigned char>(s[i + k]);
        if ((cont & 0xC0) != 0x80) { cp = lead; ++i; return false; }
        v = (v << 6) | (cont & 0x3F);
    }
    cp = v;
    i += len;
    return true;
}

void encode(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

}  // namespace

char32_t lower_codepoint(char32_t cp) { return lookup(kToLower, std::size(kToLower), cp); }
char32_t upper_codepoint(char32_t cp) { return lookup(kToUpper, std::size(kToUpper), cp); }

bool is_space_codepoint(char32_t cp) {
    switch (cp) {
        case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
        case 0x0085: case 0x00A0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        char32_t cp;
        if (decode(s, i, cp))
            encode(lower_codepoint(cp), out);
        else
            out += static_cast<char>(cp);
    }
    return out;
}

std::string to_title(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    bool at_word_start = true;
    while (i < s.size()) {
        char32_t cp;
        if (!decode(s, i, cp)) {
            out += static_cast<char>(cp);
            continue;
        }
        if (is_space_codepoint(cp)) {
            at_word_start = true;
            encode(cp, out);
        } else {
            encode(at_word_start ? upper_codepoint(cp) : lower_codepoint(cp), out);
            at_word_start = false;
        }
    }
    return out;
}

}  // namespace streamgen::unicode
