#include <doctest.h>

#include "streamgen/unicode.hpp"

using namespace streamgen;

TEST_CASE("to_lower handles ASCII and multibyte letters") {
    CHECK(unicode::to_lower("Hello World") == "hello world");
    CHECK(unicode::to_lower("ABC123") == "abc123");
    CHECK(unicode::to_lower("GR\xC3\x9C\xC3\x9F") == "gr\xC3\xBC\xC3\x9F");  // GRÜSS -> grüß
    CHECK(unicode::to_lower("\xD0\x9C\xD0\x98\xD0\xA0") == "\xD0\xBC\xD0\xB8\xD1\x80");  // МИР
    CHECK(unicode::to_lower("") == "");
}

TEST_CASE("to_title uppercases word starts and lowercases the rest") {
    CHECK(unicode::to_title("hello world") == "Hello World");
    CHECK(unicode::to_title("HELLO") == "Hello");
    CHECK(unicode::to_title("a b") == "A B");
    CHECK(unicode::to_title("  two  spaces ") == "  Two  Spaces ");
    CHECK(unicode::to_title("\xC3\xBC" "ber alles") == "\xC3\x9C" "ber Alles");  // über
}

TEST_CASE("non-letter and unmapped codepoints are fixed points") {
    CHECK(unicode::to_lower("1234 .,;") == "1234 .,;");
    CHECK(unicode::to_title("42 7x") == "42 7x");
    CHECK(unicode::to_lower("\xE6\x97\xA5\xE6\x9C\xAC") == "\xE6\x97\xA5\xE6\x9C\xAC");  // 日本
}

TEST_CASE("unicode whitespace separates title-case words") {
    // U+00A0 no-break space between words
    CHECK(unicode::to_title("one\xC2\xA0two") == "One\xC2\xA0Two");
}
