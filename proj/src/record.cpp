#include "streamgen/record.hpp"

#include "streamgen/errors.hpp"

namespace streamgen {

namespace {

// Length of a UTF-8 sequence given its lead byte, or 0 if invalid.
int sequence_length(unsigned char b) {
    if (b < 0x80) return 1;
    if ((b & 0xE0) == 0xC0) return 2;
    if ((b & 0xF0) == 0xE0) return 3;
    if ((b & 0xF8) == 0xF0) return 4;
    return 0;
}

}  // namespace

std::size_t find_invalid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char lead = static_cast<unsigned char>(s[i]);
        int len = sequence_length(lead);
        if (len == 0) return i;
        if (len == 1) {
            ++i;
            continue;
        }
        if (i + len > s.size()) return i;
        std::uint32_t cp = lead & (0x7F >> len);
        for (int k = 1; k < len; ++k) {
            unsigned char cont = static_cast<unsigned char>(s[i + k]);
            if ((cont & 0xC0) != 0x80) return i;
            cp = (cp << 6) | (cont & 0x3F);
        }
        // Overlong encodings, surrogates, and values beyond U+10FFFF.
        static constexpr std::uint32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
        i += len;
    }
    return std::string_view::npos;
}

Record parse(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (std::size_t bad = find_invalid_utf8(line); bad != std::string_view::npos)
        throw MalformedInputError("invalid UTF-8 at byte offset " + std::to_string(bad), bad);

    Record r;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            r.fields.emplace_back(line.substr(start));
            break;
        }
        r.fields.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return r;
}

std::string serialize(const Record& r) {
    std::string out;
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
        if (i) out += '\t';
        out += r.fields[i];
    }
    return out;
}

void serialize_to(const Record& r, std::string& out) {
    for (std::size_t i = 0; i < r.fields.size(); ++i) {
        if (i) out += '\t';
        out += r.fields[i];
    }
    out += '\n';
}

}  // namespace streamgen
