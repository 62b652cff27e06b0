#include <doctest.h>

#include <random>

#include "streamgen/errors.hpp"
#include "streamgen/record.hpp"

using namespace streamgen;

TEST_CASE("parse splits on tabs") {
    CHECK(parse("hello\tworld") == Record({"hello", "world"}));
    CHECK(parse("a\t\tb") == Record({"a", "", "b"}));
    CHECK(parse("single") == Record({"single"}));
}

TEST_CASE("parse preserves empty fields: k tabs -> k+1 fields") {
    CHECK(parse("").fields.size() == 1);
    CHECK(parse("\t").fields.size() == 2);
    CHECK(parse("\t\t\t").fields.size() == 4);
    for (std::size_t k = 0; k < 10; ++k)
        CHECK(parse(std::string(k, '\t')).fields.size() == k + 1);
}

TEST_CASE("serialize joins with tabs") {
    CHECK(serialize(Record({"a", "b"})) == "a\tb");
    CHECK(serialize(Record({""})) == "");
    CHECK(serialize(Record({"x", "", "y"})) == "x\t\ty");
}

TEST_CASE("trailing carriage return is stripped") {
    CHECK(parse("a\tb\r") == Record({"a", "b"}));
    CHECK(parse("a\tb\r\t") == Record({"a", "b\r", ""}));  // only at end of line
}

TEST_CASE("invalid UTF-8 is rejected with a byte offset") {
    std::string bad = "ok\t\xFFzzz";
    CHECK_THROWS_AS(parse(bad), MalformedInputError);
    try {
        parse(bad);
    } catch (const MalformedInputError& e) {
        CHECK(e.byte_offset() == 3);
    }
    // Truncated multibyte sequence and overlong encoding.
    CHECK_THROWS_AS(parse("abc\xC3"), MalformedInputError);
    CHECK_THROWS_AS(parse("\xC0\xAF"), MalformedInputError);
    // Surrogate half.
    CHECK_THROWS_AS(parse("\xED\xA0\x80"), MalformedInputError);
    // Valid multibyte text is fine.
    CHECK(parse("gr\xC3\xBC\xC3\x9F\tdich").fields[0] == "gr\xC3\xBC\xC3\x9F");
}

TEST_CASE("round-trip property: serialize(parse(s)) == s") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> n_fields(1, 6);
    std::uniform_int_distribution<int> field_len(0, 12);
    // Printable ASCII plus some multibyte codepoints, no tabs or newlines.
    const std::vector<std::string> alphabet = {"a", "Z", "0", " ", ".", "\xC3\xA9",
                                               "\xE6\x97\xA5", "\xF0\x9F\x98\x80"};
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);

    for (int trial = 0; trial < 500; ++trial) {
        std::string line;
        int k = n_fields(rng);
        for (int f = 0; f < k; ++f) {
            if (f) line += '\t';
            int len = field_len(rng);
            for (int i = 0; i < len; ++i) line += alphabet[pick(rng)];
        }
        auto record = parse(line);
        CHECK(record.fields.size() == static_cast<std::size_t>(k));
        CHECK(serialize(record) == line);
        CHECK(parse(serialize(record)) == record);
    }
}
