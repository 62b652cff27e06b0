#include <doctest.h>

#include <cmath>

#include "streamgen/errors.hpp"
#include "streamgen/operators.hpp"
#include "streamgen/pipeline.hpp"
#include "test_util.hpp"

using namespace streamgen;
using streamgen::test::TempDir;

namespace {

PipelineSpec default_spec(const std::filesystem::path& dir, std::uint64_t seed) {
    register_builtin_pipelines();
    PipelineSpec spec;
    spec.name = "default";
    spec.sources = {dir};
    spec.seed = seed;
    return spec;
}

PipelineSpec robust_spec(const std::filesystem::path& pa, const std::filesystem::path& bt,
                         std::vector<double> weights, std::uint64_t seed) {
    register_builtin_pipelines();
    PipelineSpec spec;
    spec.name = "robust-case";
    spec.sources = {pa, bt};
    spec.mix_weights = std::move(weights);
    spec.seed = seed;
    return spec;
}

}  // namespace

TEST_CASE("registry: duplicates rejected, unknown names listed") {
    register_builtin_pipelines();
    CHECK(pipeline_exists("default"));
    CHECK(pipeline_exists("robust-case"));
    CHECK_THROWS_AS(register_pipeline("default", 1, nullptr), ConfigError);

    PipelineSpec spec;
    spec.name = "nope";
    try {
        build_stream(spec, {});
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string what = e.what();
        CHECK(what.find("nope") != std::string::npos);
        CHECK(what.find("default") != std::string::npos);
        CHECK(what.find("robust-case") != std::string::npos);
    }
}

TEST_CASE("default pipeline: one epoch is a permutation of the input") {
    TempDir tmp;
    test::make_id_corpus(tmp.path(), 3, 100);
    BuildContext ctx;
    ctx.seed = 17;
    auto stream = build_stream(default_spec(tmp.path(), 17), ctx);
    auto records = take(stream, 300);
    auto hist = test::field_histogram(records, 2);
    CHECK(hist.size() == 300);
    for (const auto& [id, n] : hist) CHECK(n == 1);
}

TEST_CASE("default pipeline rejects arity mismatch") {
    TempDir tmp;
    test::make_id_corpus(tmp.path(), 1, 1);
    auto spec = default_spec(tmp.path(), 0);
    spec.sources.push_back(tmp.path());
    CHECK_THROWS_AS(build_stream(spec, {}), ConfigError);
}

TEST_CASE("default pipeline replays identically under a fixed seed") {
    TempDir tmp;
    test::make_id_corpus(tmp.path(), 3, 50);
    BuildContext ctx;
    ctx.seed = 42;
    auto a = build_stream(default_spec(tmp.path(), 42), ctx);
    auto b = build_stream(default_spec(tmp.path(), 42), ctx);
    for (int i = 0; i < 1000; ++i) CHECK(*a() == *b());
}

TEST_CASE("robust-case: BT fraction follows the mix weights") {
    TempDir tmp;
    test::make_id_corpus(tmp.path() / "pa", 2, 200);
    test::make_id_corpus(tmp.path() / "bt", 2, 200);

    auto frac_bt = [&](std::vector<double> weights) {
        BuildContext ctx;
        ctx.seed = 3;
        auto stream =
            build_stream(robust_spec(tmp.path() / "pa", tmp.path() / "bt", weights, 3), ctx);
        const std::size_t n = 100'000;
        std::size_t bt = 0;
        for (std::size_t i = 0; i < n; ++i)
            if ((*stream()).fields[0].rfind("[BT] ", 0) == 0) ++bt;
        return static_cast<double>(bt) / n;
    };

    double sigma_half = std::sqrt(0.5 * 0.5 / 100'000.0);
    CHECK(std::abs(frac_bt({1, 1}) - 0.5) < 3 * sigma_half);

    double p_third = 1.0 / 3.0;
    double sigma_third = std::sqrt(p_third * (1 - p_third) / 100'000.0);
    CHECK(std::abs(frac_bt({2, 1}) - p_third) < 3 * sigma_third);

    CHECK(frac_bt({1, 0}) == 0.0);
}

TEST_CASE("robust-case: case-variant fractions match the defaults") {
    TempDir tmp;
    // Mixed-case sources so that lowercasing and title-casing are observable.
    std::vector<std::string> lines;
    for (int i = 0; i < 500; ++i)
        lines.push_back("Some MiXed Case source " + std::to_string(i) + "\tTarget TexT " +
                        std::to_string(i) + "\tid-" + std::to_string(i));
    test::write_lines(tmp.path() / "pa.tsv.gz", lines);
    std::filesystem::create_directories(tmp.path() / "pa");
    std::filesystem::rename(tmp.path() / "pa.tsv.gz", tmp.path() / "pa" / "pa.tsv.gz");

    BuildContext ctx;
    ctx.seed = 8;
    // Only the parallel source, so every output is traceable to it.
    auto stream = build_stream(robust_spec(tmp.path() / "pa", tmp.path() / "pa", {1, 0}, 8), ctx);

    const std::size_t n = 100'000;
    std::size_t lowered = 0, titled = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto r = *stream();
        if (r.fields[0].rfind("some mixed case source", 0) == 0) ++lowered;
        else if (r.fields[0].rfind("Some Mixed Case Source", 0) == 0) ++titled;
    }
    double f_low = static_cast<double>(lowered) / n;
    double f_title = static_cast<double>(titled) / n;
    CHECK(std::abs(f_low - 0.04) < 3 * std::sqrt(0.04 * 0.96 / n));
    CHECK(std::abs(f_title - 0.01) < 3 * std::sqrt(0.01 * 0.99 / n));
}

TEST_CASE("robust-case honors the case-weights and tag params") {
    TempDir tmp;
    test::make_id_corpus(tmp.path() / "pa", 1, 20);
    test::make_id_corpus(tmp.path() / "bt", 1, 20);
    auto spec = robust_spec(tmp.path() / "pa", tmp.path() / "bt", {0, 1}, 4);
    spec.params["case-weights"] = "1 0 0";  // identity only
    spec.params["tag"] = "<syn>";
    BuildContext ctx;
    ctx.seed = 4;
    auto stream = build_stream(spec, ctx);
    for (int i = 0; i < 50; ++i) {
        auto r = *stream();
        CHECK(r.fields[0].rfind("<syn> src-", 0) == 0);
    }

    spec.params["case-weights"] = "1 0";
    CHECK_THROWS_AS(build_stream(spec, ctx), ConfigError);
}

TEST_CASE("scaled mix weights give a byte-identical stream") {
    TempDir tmp;
    test::make_id_corpus(tmp.path() / "pa", 1, 50);
    test::make_id_corpus(tmp.path() / "bt", 1, 50);
    BuildContext ctx;
    ctx.seed = 10;
    auto a = build_stream(robust_spec(tmp.path() / "pa", tmp.path() / "bt", {2, 1}, 10), ctx);
    auto b = build_stream(robust_spec(tmp.path() / "pa", tmp.path() / "bt", {4, 2}, 10), ctx);
    for (int i = 0; i < 2000; ++i) CHECK(serialize(*a()) == serialize(*b()));
}

TEST_CASE("single-epoch coverage per source") {
    TempDir tmp;
    test::make_id_corpus(tmp.path() / "pa", 2, 25);
    test::make_id_corpus(tmp.path() / "bt", 2, 25);
    // Silence the other source: with weight 0 it is never pulled, so the
    // active source must cycle through all of its records exactly once.
    BuildContext ctx;
    ctx.seed = 12;
    auto spec = robust_spec(tmp.path() / "pa", tmp.path() / "bt", {1, 0}, 12);
    spec.params["case-weights"] = "1 0 0";
    auto stream = build_stream(spec, ctx);
    auto records = take(stream, 50);
    auto hist = test::field_histogram(records, 2);
    CHECK(hist.size() == 50);
    for (const auto& [id, n] : hist) CHECK(n == 1);
}

TEST_CASE("mix weight validation") {
    TempDir tmp;
    test::make_id_corpus(tmp.path() / "pa", 1, 5);
    test::make_id_corpus(tmp.path() / "bt", 1, 5);
    auto spec = robust_spec(tmp.path() / "pa", tmp.path() / "bt", {1, 1, 1}, 0);
    CHECK_THROWS_AS(build_stream(spec, {}), ConfigError);
    spec.mix_weights = {0, 0};
    CHECK_THROWS_AS(build_stream(spec, {}), ConfigError);
}
