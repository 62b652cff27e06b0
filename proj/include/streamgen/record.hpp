#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace streamgen {

/// One row of tab-separated data: an ordered list of UTF-8 fields.
/// By convention field 0 is the source text and field 1 the target text;
/// fields 2+ carry metadata such as a document id. The code itself attaches
/// no meaning to any field.
///
/// Records are plain values, immutable by convention once constructed, and
/// safe to move between threads.
struct Record {
    std::vector<std::string> fields;

    Record() = default;
    explicit Record(std::vector<std::string> f) : fields(std::move(f)) {}

    bool operator==(const Record&) const = default;
};

/// Splits `line` on tabs, preserving empty fields (k tabs -> k+1 fields).
/// A single trailing carriage return is stripped first, so CRLF corpora
/// parse the same as LF ones. Throws MalformedInputError (with the byte
/// offset) if the line is not valid UTF-8.
Record parse(std::string_view line);

/// Tab-joins the fields. parse(serialize(r)) == r, and for any valid line s,
/// serialize(parse(s)) == s.
std::string serialize(const Record& r);

/// Appends the serialized record plus '\n' to `out`; avoids a temporary
/// string on the hot output path.
void serialize_to(const Record& r, std::string& out);

/// Returns the byte offset of the first invalid UTF-8 byte, or npos if the
/// input is valid.
std::size_t find_invalid_utf8(std::string_view s);

}  // namespace streamgen
