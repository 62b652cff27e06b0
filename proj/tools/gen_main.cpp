// Stream generator CLI: builds the requested pipeline over its data sources
// and writes an infinite stream of TSV records to stdout. Pair it with a
// trainer (or anything else) through a pipe:
//
//   gen robust-case parallel.tsv.gz backtrans.tsv.gz --mix-weights 1 1 | trainer
//
// Diagnostics go to stderr only.

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "streamgen/errors.hpp"
#include "streamgen/operators.hpp"
#include "streamgen/pipeline.hpp"
#include "streamgen/workers.hpp"

namespace {

volatile std::sig_atomic_t g_interrupted = 0;

void on_interrupt(int) { g_interrupted = 1; }

// Splits off unrecognized "--key value" (or "--key=value") flags as pipeline
// params before CLI11 sees the command line, so that positional source paths
// cannot swallow the values.
std::vector<std::string> extract_params(int argc, char** argv,
                                        std::map<std::string, std::string>& params) {
    static const std::set<std::string> known{
        "--mix-weights", "-n", "--num-workers", "--seed",      "--shard-size",
        "--chunk-size",  "--max-records",       "--cache-dir", "--help",
        "-h",
    };
    std::vector<std::string> args;
    for (int i = 0; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg.rfind("--", 0) != 0 || known.count(arg)) {
            args.push_back(std::move(arg));
            continue;
        }
        if (auto eq = arg.find('='); eq != std::string::npos) {
            if (known.count(arg.substr(0, eq))) {
                args.push_back(std::move(arg));
                continue;
            }
            params[arg.substr(2, eq - 2)] = arg.substr(eq + 1);
            continue;
        }
        if (i + 1 >= argc)
            throw streamgen::ConfigError("pipeline parameter \"" + arg + "\" needs a value");
        params[arg.substr(2)] = argv[++i];
    }
    return args;
}

int run(int argc, char** argv) {
    using namespace streamgen;

    CLI::App app{"Infinite permuted TSV record stream generator"};

    std::map<std::string, std::string> params;
    auto args = extract_params(argc, argv, params);
    std::vector<char*> argv_filtered;
    for (auto& arg : args) argv_filtered.push_back(arg.data());

    std::string pipeline;
    std::vector<std::string> sources;
    std::vector<double> mix_weights;
    std::size_t num_workers = 1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t shard_size = 1'000'000;
    std::size_t chunk_size = 1000;
    std::uint64_t max_records = 0;
    std::string cache_dir;

    app.add_option("pipeline", pipeline, "Pipeline name")->required();
    app.add_option("sources", sources, "Data source paths (directories of shards or single files)")
        ->required();
    app.add_option("--mix-weights", mix_weights,
                   "Mixing weights over the data sources (normalized; default uniform)");
    app.add_option("-n,--num-workers", num_workers, "Number of parallel workers")
        ->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (default: from entropy)");
    app.add_option("--shard-size", shard_size, "Lines per shard when auto-sharding a single file")
        ->check(CLI::PositiveNumber);
    app.add_option("--chunk-size", chunk_size, "Lines read from each worker per merge turn")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-records", max_records, "Stop after this many records (0 = infinite)");
    app.add_option("--cache-dir", cache_dir, "Auto-shard cache directory");

    try {
        app.parse(static_cast<int>(argv_filtered.size()), argv_filtered.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    seed_given = seed_opt->count() > 0;
    if (!seed_given) seed = std::random_device{}();
    std::fprintf(stderr, "seed: %llu\n", static_cast<unsigned long long>(seed));

    register_builtin_pipelines();

    PipelineSpec spec;
    spec.name = pipeline;
    spec.sources.assign(sources.begin(), sources.end());
    spec.mix_weights = mix_weights;
    spec.seed = seed;
    spec.params = params;
    spec.cache.shard_size = shard_size;
    if (!cache_dir.empty()) spec.cache.cache_root = cache_dir;

    WorkerPlan plan;
    plan.num_workers = num_workers;
    plan.chunk_size = chunk_size;
    plan.seed = seed;

    auto stream = run_workers(spec, plan);

    std::string buf;
    buf.reserve(chunk_size * 64);
    std::uint64_t emitted = 0;
    std::size_t buffered = 0;
    bool pipe_closed = false;

    auto flush = [&]() -> bool {
        if (buf.empty()) return true;
        if (std::fwrite(buf.data(), 1, buf.size(), stdout) != buf.size()) {
            pipe_closed = true;  // downstream hung up; normal shutdown
            return false;
        }
        buf.clear();
        buffered = 0;
        return true;
    };

    while (!g_interrupted && (max_records == 0 || emitted < max_records)) {
        auto r = stream();
        if (!r) break;
        serialize_to(*r, buf);
        ++emitted;
        if (++buffered >= chunk_size && !flush()) break;
    }
    if (!pipe_closed) flush();
    std::fflush(stdout);

    FilterStats::report(stderr);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    std::signal(SIGPIPE, SIG_IGN);
    std::signal(SIGINT, on_interrupt);
    std::signal(SIGTERM, on_interrupt);
    try {
        return run(argc, argv);
    } catch (const streamgen::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const streamgen::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
