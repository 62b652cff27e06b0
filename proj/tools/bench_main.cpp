// Throughput benchmark harness.
//
//   bench synth --out DIR --lines N --shards K [--fields F --mean-tokens T --seed S]
//   bench produce <baseline|pipeline name> <source>... [-n W --max-records M ...]
//   bench consume [--mode count|dual-pool] [--pool N --threads T --batch B] [--interval S]
//
// produce writes records to stdout; consume reads stdin. Reports are printed
// on stderr, ending with one machine-readable "key=value ..." summary line.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "streamgen/bench.hpp"
#include "streamgen/errors.hpp"
#include "streamgen/pipeline.hpp"
#include "streamgen/workers.hpp"

namespace {

using namespace streamgen;

void print_summary(const bench::ThroughputReport& rep) {
    std::fprintf(stderr,
                 "producer=%s workers=%zu lines=%llu malformed=%llu seconds=%.3f rate=%.0f\n",
                 rep.producer.c_str(), rep.num_workers,
                 static_cast<unsigned long long>(rep.lines),
                 static_cast<unsigned long long>(rep.malformed_lines), rep.wall_seconds,
                 rep.lines_per_second);
}

int cmd_synth(const std::string& out, const bench::SynthConfig& cfg) {
    auto dir = bench::synth_corpus(out, cfg);
    std::fprintf(stderr, "wrote %llu lines in %zu shard(s) under %s\n",
                 static_cast<unsigned long long>(cfg.lines), cfg.num_shards,
                 dir.string().c_str());
    return 0;
}

int cmd_produce(const std::string& producer, const std::vector<std::string>& sources,
                std::size_t num_workers, std::uint64_t max_records, std::uint64_t seed,
                std::size_t shard_size) {
    if (producer == "baseline") {
        if (sources.size() != 1)
            throw ConfigError("baseline takes exactly one source");
        auto src = DataSource::open(sources[0], ShardCacheConfig{{}, shard_size});
        auto start = std::chrono::steady_clock::now();
        std::uint64_t bytes = bench::baseline_decompress(*src, stdout);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        std::fprintf(stderr, "producer=baseline bytes=%llu seconds=%.3f\n",
                     static_cast<unsigned long long>(bytes), secs);
        return 0;
    }

    register_builtin_pipelines();
    PipelineSpec spec;
    spec.name = producer;
    spec.sources.assign(sources.begin(), sources.end());
    spec.seed = seed;
    spec.cache.shard_size = shard_size;
    WorkerPlan plan{num_workers, 1000, seed};

    auto stream = run_workers(spec, plan);
    std::string buf;
    std::uint64_t emitted = 0;
    while (max_records == 0 || emitted < max_records) {
        auto r = stream();
        if (!r) break;
        buf.clear();
        serialize_to(*r, buf);
        if (std::fwrite(buf.data(), 1, buf.size(), stdout) != buf.size()) break;
        ++emitted;
    }
    std::fflush(stdout);
    return 0;
}

int cmd_consume(const std::string& mode, const bench::PoolConfig& pool, double interval) {
    if (mode == "count") {
        auto rep = bench::count_consumer(stdin, interval, stderr);
        print_summary(rep);
        return 0;
    }
    if (mode != "dual-pool") throw ConfigError("consume mode must be count or dual-pool");

    // Wrap stdin in a record stream and drain it through the dual-pool model.
    auto line_stream = []() -> std::optional<Record> {
        std::string line;
        int c;
        while ((c = std::getchar()) != EOF) {
            if (c == '\n') return parse(line);
            line += static_cast<char>(c);
        }
        if (!line.empty()) return parse(line);
        return std::nullopt;
    };
    auto start = std::chrono::steady_clock::now();
    auto batches = bench::dual_pool_consumer(line_stream, pool);
    std::uint64_t records = 0, nbatches = 0;
    while (auto b = batches()) {
        records += b->size();
        ++nbatches;
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "mode=dual-pool records=%llu batches=%llu seconds=%.3f rate=%.0f\n",
                 static_cast<unsigned long long>(records),
                 static_cast<unsigned long long>(nbatches), secs,
                 secs > 0 ? records / secs : 0.0);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Producer/consumer throughput benchmarks"};
    app.require_subcommand(1);

    auto* synth = app.add_subcommand("synth", "Generate a deterministic synthetic corpus");
    std::string out;
    bench::SynthConfig synth_cfg;
    synth->add_option("--out", out, "Output shard directory")->required();
    synth->add_option("--lines", synth_cfg.lines, "Total lines")->required();
    synth->add_option("--shards", synth_cfg.num_shards, "Number of shards");
    synth->add_option("--fields", synth_cfg.fields, "Fields per record (last one is the id)");
    synth->add_option("--mean-tokens", synth_cfg.mean_tokens, "Mean tokens per text field");
    synth->add_option("--seed", synth_cfg.seed, "RNG seed");

    auto* produce = app.add_subcommand("produce", "Write records to stdout");
    std::string producer;
    std::vector<std::string> sources;
    std::size_t num_workers = 1;
    std::uint64_t max_records = 0, prod_seed = 0;
    std::size_t shard_size = 1'000'000;
    produce->add_option("producer", producer, "baseline or a pipeline name")->required();
    produce->add_option("sources", sources, "Data source paths")->required();
    produce->add_option("-n,--num-workers", num_workers)->check(CLI::PositiveNumber);
    produce->add_option("--max-records", max_records, "0 = until pipe closes");
    produce->add_option("--seed", prod_seed);
    produce->add_option("--shard-size", shard_size)->check(CLI::PositiveNumber);

    auto* consume = app.add_subcommand("consume", "Count or batch records from stdin");
    std::string mode = "count";
    bench::PoolConfig pool;
    double interval = 0.0;
    consume->add_option("--mode", mode, "count or dual-pool");
    consume->add_option("--pool", pool.pool_capacity, "Records per pool");
    consume->add_option("--threads", pool.prefetch_threads, "Prefetch threads");
    consume->add_option("--batch", pool.batch_size, "Records per batch");
    consume->add_option("--interval", interval, "Seconds between interim reports");

    try {
        app.parse(argc, argv);
        if (synth->parsed()) return cmd_synth(out, synth_cfg);
        if (produce->parsed())
            return cmd_produce(producer, sources, num_workers, max_records, prod_seed,
                               shard_size);
        return cmd_consume(mode, pool, interval);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const streamgen::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
