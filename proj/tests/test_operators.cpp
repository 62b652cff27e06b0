#include <doctest.h>

#include <cmath>
#include <set>

#include "streamgen/errors.hpp"
#include "streamgen/operators.hpp"
#include "test_util.hpp"

using namespace streamgen;

namespace {

RecordStream counting_stream(const std::string& prefix) {
    return [prefix, i = 0]() mutable -> std::optional<Record> {
        auto n = std::to_string(i++);
        return Record({prefix + n, "tgt-" + n, prefix + "id-" + n});
    };
}

}  // namespace

TEST_CASE("mix with equal weights is balanced") {
    auto stream = mix({counting_stream("x"), counting_stream("y")}, {1.0, 1.0}, Rng(1234));
    std::size_t from_x = 0;
    const std::size_t n = 100'000;
    for (std::size_t i = 0; i < n; ++i)
        if ((*stream()).fields[0][0] == 'x') ++from_x;
    // Binomial 99.9% interval around 0.5 for n = 100k.
    double frac = static_cast<double>(from_x) / n;
    CHECK(frac > 0.49);
    CHECK(frac < 0.51);
}

TEST_CASE("mix with weight zero never samples that stream") {
    auto stream = mix({counting_stream("x"), counting_stream("y")}, {1.0, 0.0}, Rng(5));
    for (int i = 0; i < 1000; ++i) {
        auto r = *stream();
        CHECK(r.fields[0] == "x" + std::to_string(i));
    }
}

TEST_CASE("mix matches the robust-case weight vector within 3 sigma") {
    std::vector<double> weights{0.95, 0.04, 0.01};
    auto stream =
        mix({counting_stream("a"), counting_stream("b"), counting_stream("c")}, weights, Rng(9));
    const std::size_t n = 100'000;
    std::map<char, std::size_t> counts;
    for (std::size_t i = 0; i < n; ++i) ++counts[(*stream()).fields[0][0]];
    const char keys[] = {'a', 'b', 'c'};
    for (int k = 0; k < 3; ++k) {
        double p = weights[k];
        double sigma = std::sqrt(p * (1 - p) / n);
        double frac = static_cast<double>(counts[keys[k]]) / n;
        CHECK(std::abs(frac - p) < 3 * sigma);
    }
}

TEST_CASE("mix validates its inputs") {
    CHECK_THROWS_AS(mix({counting_stream("x")}, {1.0, 1.0}, Rng(0)), ConfigError);
    CHECK_THROWS_AS(mix({counting_stream("x")}, {0.0}, Rng(0)), ConfigError);
    CHECK_THROWS_AS(mix({}, {}, Rng(0)), ConfigError);
}

TEST_CASE("mix redistributes the weight of an exhausted stream") {
    auto finite = stream_from(std::vector<Record>{Record({"f"})});
    auto stream = mix({std::move(finite), counting_stream("x")}, {1.0, 1.0}, Rng(3));
    std::vector<Record> out;
    std::size_t f_count = 0;
    for (int i = 0; i < 100; ++i) {
        auto r = *stream();
        if (r.fields[0] == "f") ++f_count;
    }
    CHECK(f_count == 1);  // the finite record appears once, then only x
}

TEST_CASE("mix over two finite streams conserves every record") {
    std::vector<Record> a, b;
    for (int i = 0; i < 50; ++i) a.push_back(Record({"a" + std::to_string(i)}));
    for (int i = 0; i < 30; ++i) b.push_back(Record({"b" + std::to_string(i)}));
    auto stream = mix({stream_from(a), stream_from(b)}, {1.0, 2.0}, Rng(11));
    std::multiset<std::string> seen;
    while (auto r = stream()) seen.insert(r->fields[0]);
    CHECK(seen.size() == 80);
    for (const auto& r : a) CHECK(seen.count(r.fields[0]) == 1);
    for (const auto& r : b) CHECK(seen.count(r.fields[0]) == 1);
}

TEST_CASE("mix_variants consumes each upstream record exactly once") {
    std::vector<Record> input;
    for (int i = 0; i < 5000; ++i) input.push_back(Record({"Src " + std::to_string(i), "t"}));
    std::vector<RecordFn> variants{
        nullptr,
        [](Record&& r) { return lower_case_source_record(std::move(r)); },
        [](Record&& r) { return title_case_both_record(std::move(r)); },
    };
    auto stream = mix_variants(stream_from(input), std::move(variants), {0.5, 0.3, 0.2}, Rng(21));
    std::multiset<std::string> ids;
    std::size_t count = 0;
    while (auto r = stream()) {
        ++count;
        // The numeric suffix survives all three variants.
        auto pos = r->fields[0].find(' ');
        ids.insert(r->fields[0].substr(pos + 1));
    }
    CHECK(count == input.size());
    CHECK(ids.size() == input.size());
    for (int i = 0; i < 5000; ++i) CHECK(ids.count(std::to_string(i)) == 1);
}

TEST_CASE("stochastic operators replay identically under a fixed seed") {
    auto make = [] {
        return mix_variants(counting_stream("V"), {nullptr, [](Record&& r) {
                                return lower_case_source_record(std::move(r));
                            }},
                            {0.9, 0.1}, Rng(77));
    };
    auto a = make();
    auto b = make();
    for (int i = 0; i < 2000; ++i) CHECK(*a() == *b());
}

TEST_CASE("lower_case_source changes only field 0") {
    auto stream = lower_case_source(stream_from(std::vector<Record>{
        Record({"Hello World", "Ziel"}), Record({"ABC"}), Record({"", "x"})}));
    CHECK(*stream() == Record({"hello world", "Ziel"}));
    CHECK(*stream() == Record({"abc"}));
    CHECK(*stream() == Record({"", "x"}));
}

TEST_CASE("title_case_both changes fields 0 and 1, keeps metadata") {
    auto stream = title_case_both(stream_from(std::vector<Record>{
        Record({"hello world", "guten tag"}), Record({"HELLO", "TAG"}),
        Record({"a b", "c d", "doc7"})}));
    CHECK(*stream() == Record({"Hello World", "Guten Tag"}));
    CHECK(*stream() == Record({"Hello", "Tag"}));
    CHECK(*stream() == Record({"A B", "C D", "doc7"}));
}

TEST_CASE("title_case_both rejects short records with the ordinal") {
    auto stream = title_case_both(
        stream_from(std::vector<Record>{Record({"ok", "ok"}), Record({"solo"})}));
    CHECK(stream());
    try {
        stream();
        FAIL("expected DataError");
    } catch (const DataError& e) {
        std::string what = e.what();
        CHECK(what.find("title_case_both") != std::string::npos);
        CHECK(what.find("record 1") != std::string::npos);
    }
}

TEST_CASE("tag_source prefixes field 0") {
    auto stream = tag_source(stream_from(std::vector<Record>{
                                 Record({"guten tag", "good day"}), Record({"", ""}),
                                 Record({"hi", "hallo"})}),
                             "[BT]");
    CHECK(*stream() == Record({"[BT] guten tag", "good day"}));
    CHECK(*stream() == Record({"[BT] ", ""}));
    CHECK(*stream() == Record({"[BT] hi", "hallo"}));

    CHECK_THROWS_AS(tag_source(counting_stream("x"), ""), ConfigError);
    CHECK_THROWS_AS(tag_source(counting_stream("x"), "a\tb"), ConfigError);
}

TEST_CASE("match_filter keeps records with equal match multisets") {
    const std::string pattern = R"(\bhttps?:\S+[a-z]\b)";
    auto stats = std::make_shared<FilterStats>("url");
    auto stream = match_filter(
        stream_from(std::vector<Record>{
            Record({"see https://x.com/a", "siehe https://x.com/a"}),
            Record({"see https://x.com/a", "siehe"}),
            Record({"no urls here", "keine urls"}),
            Record({"https://a.io/x https://a.io/x", "https://a.io/x"}),  // multiset differs
        }),
        pattern, 0, 1, stats);
    CHECK(*stream() == Record({"see https://x.com/a", "siehe https://x.com/a"}));
    CHECK(*stream() == Record({"no urls here", "keine urls"}));
    CHECK(!stream());
    CHECK(stats->dropped() == 2);
}

TEST_CASE("match_filter output is a subsequence of its input") {
    std::vector<Record> input;
    for (int i = 0; i < 40; ++i) {
        std::string url = i % 3 ? "http://e.com/p" + std::to_string(i) : "";
        std::string other = i % 2 ? url : "";
        input.push_back(Record({"s " + url + " #" + std::to_string(i), "t " + other}));
    }
    auto stream = match_filter(stream_from(input), R"(\bhttps?:\S+[a-z]\b)");
    std::size_t last_index = 0;
    bool first = true;
    while (auto r = stream()) {
        auto pos = r->fields[0].rfind('#');
        std::size_t index = std::stoul(r->fields[0].substr(pos + 1));
        if (!first) CHECK(index > last_index);
        last_index = index;
        first = false;
    }
}

TEST_CASE("match_filter rejects a bad pattern at construction") {
    CHECK_THROWS_AS(match_filter(counting_stream("x"), "(unclosed"), ConfigError);
}

TEST_CASE("group_documents groups consecutive equal docids") {
    auto groups = group_documents(stream_from(std::vector<Record>{
        Record({"s", "t", "d1"}), Record({"s", "t", "d1"}), Record({"s", "t", "d2"}),
        Record({"s", "t", "d2"}), Record({"s", "t", "d2"})}));
    CHECK(groups()->size() == 2);
    CHECK(groups()->size() == 3);
    CHECK(!groups());
}

TEST_CASE("group_documents: singleton and non-adjacent ids") {
    auto one = group_documents(stream_from(std::vector<Record>{Record({"s", "t", "d1"})}));
    CHECK(one()->size() == 1);
    CHECK(!one());

    auto aba = group_documents(stream_from(std::vector<Record>{
        Record({"s", "t", "d1"}), Record({"s", "t", "d2"}), Record({"s", "t", "d1"})}));
    CHECK(aba()->size() == 1);
    CHECK(aba()->size() == 1);
    CHECK(aba()->size() == 1);
    CHECK(!aba());
}

TEST_CASE("group_documents rejects records without the docid field") {
    auto groups = group_documents(stream_from(std::vector<Record>{Record({"s", "t"})}));
    CHECK_THROWS_AS(groups(), DataError);
}

TEST_CASE("concat_documents joins sources and targets") {
    auto groups = stream_from(std::vector<RecordGroup>{
        {Record({"s1", "t1", "d"}), Record({"s2", "t2", "d"})}});
    auto stream = concat_documents(std::move(groups), 8, " <sep> ");
    CHECK(*stream() == Record({"s1 <sep> s2", "t1 <sep> t2"}));
    CHECK(!stream());
}

TEST_CASE("concat_documents chunks groups by max_sentences") {
    RecordGroup group;
    for (int i = 0; i < 5; ++i)
        group.push_back(Record({"s" + std::to_string(i), "t" + std::to_string(i), "d"}));
    auto stream = concat_documents(stream_from(std::vector<RecordGroup>{group}), 2, " ");
    CHECK(*stream() == Record({"s0 s1", "t0 t1"}));
    CHECK(*stream() == Record({"s2 s3", "t2 t3"}));
    CHECK(*stream() == Record({"s4", "t4"}));
    CHECK(!stream());
}

TEST_CASE("concat_documents: singleton group is the identity on fields 0,1") {
    auto stream = concat_documents(
        stream_from(std::vector<RecordGroup>{{Record({"src", "tgt", "d9"})}}), 8, " | ");
    CHECK(*stream() == Record({"src", "tgt"}));
}

TEST_CASE("concat_documents rejects separators with tab or newline") {
    auto groups = stream_from(std::vector<RecordGroup>{});
    CHECK_THROWS_AS(concat_documents(std::move(groups), 4, "a\tb"), ConfigError);
}

TEST_CASE("pass-through: untouched fields are byte-identical") {
    std::vector<Record> input{Record({"A", "B", "meta-1", "meta-2"})};
    auto lc = lower_case_source(stream_from(input));
    auto r = *lc();
    CHECK(r.fields[1] == "B");
    CHECK(r.fields[2] == "meta-1");
    CHECK(r.fields[3] == "meta-2");

    auto tagged = tag_source(stream_from(input), "<2de>");
    r = *tagged();
    CHECK(r.fields[1] == "B");
    CHECK(r.fields[2] == "meta-1");
}
