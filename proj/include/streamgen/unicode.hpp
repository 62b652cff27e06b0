#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace streamgen::unicode {

/// Lowercases a UTF-8 string using the Unicode simple (one-to-one) case
/// mapping. Bytes that are not valid UTF-8 pass through unchanged.
std::string to_lower(std::string_view s);

/// Title-cases a UTF-8 string: the first letter of each whitespace-delimited
/// word is uppercased, the remainder lowercased.
std::string to_title(std::string_view s);

char32_t lower_codepoint(char32_t cp);
char32_t upper_codepoint(char32_t cp);
bool is_space_codepoint(char32_t cp);

}  // namespace streamgen::unicode
