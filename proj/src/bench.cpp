#include "streamgen/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <mutex>
#include <thread>
#include <vector>

#include "streamgen/errors.hpp"
#include "streamgen/gzio.hpp"
#include "streamgen/rng.hpp"

namespace streamgen::bench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

ThroughputReport finish_report(std::string producer, std::uint64_t lines, double wall) {
    ThroughputReport rep;
    rep.producer = std::move(producer);
    rep.lines = lines;
    rep.wall_seconds = wall;
    rep.lines_per_second = wall > 0.0 ? static_cast<double>(lines) / wall : 0.0;
    return rep;
}

// Words the synthetic corpus draws from; enough variety that sorting and
// casing tests have something to chew on.
constexpr const char* kVocab[] = {
    "alpha", "bravo", "Charlie", "delta", "echo",    "Foxtrot", "golf",  "hotel",
    "india", "JULIET", "kilo",   "lima",  "Mike",    "november", "oscar", "papa",
    "Quebec", "romeo", "sierra", "tango", "uniform", "victor",   "über",  "straße",
};

}  // namespace

ThroughputReport count_consumer(std::FILE* in, double report_interval, std::FILE* diag) {
    std::vector<char> buf(1 << 16);
    std::string line;
    std::uint64_t lines = 0, malformed = 0;
    std::uint64_t interval_lines = 0;
    auto start = Clock::now();
    auto last_report = start;

    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), in)) > 0) {
        const char* p = buf.data();
        const char* end = p + n;
        while (p < end) {
            const char* nl = static_cast<const char*>(std::memchr(p, '\n', end - p));
            if (!nl) {
                line.append(p, end);
                break;
            }
            line.append(p, nl);
            ++lines;
            ++interval_lines;
            if (find_invalid_utf8(line) != std::string::npos) ++malformed;
            line.clear();
            p = nl + 1;
        }
        if (report_interval > 0.0 && diag) {
            double since = std::chrono::duration<double>(Clock::now() - last_report).count();
            if (since >= report_interval) {
                double total = seconds_since(start);
                std::fprintf(diag, "lines=%llu rate=%.0f/s interval_rate=%.0f/s\n",
                             static_cast<unsigned long long>(lines),
                             lines / total, interval_lines / since);
                last_report = Clock::now();
                interval_lines = 0;
            }
        }
    }
    if (!line.empty()) {  // final unterminated line still counts
        ++lines;
        if (find_invalid_utf8(line) != std::string::npos) ++malformed;
    }

    auto rep = finish_report("stdin", lines, seconds_since(start));
    rep.malformed_lines = malformed;
    return rep;
}

ThroughputReport measure_stream_rate(RecordStream& stream, std::uint64_t lines,
                                     std::uint64_t warmup) {
    for (std::uint64_t i = 0; i < warmup; ++i)
        if (!stream()) return finish_report("stream", 0, 0.0);
    auto start = Clock::now();
    std::uint64_t counted = 0;
    for (std::uint64_t i = 0; i < lines; ++i) {
        if (!stream()) break;
        ++counted;
    }
    return finish_report("stream", counted, seconds_since(start));
}

std::filesystem::path synth_corpus(const std::filesystem::path& dir, const SynthConfig& cfg) {
    if (cfg.lines == 0) throw ConfigError("synth: need at least one line");
    if (cfg.num_shards == 0 || cfg.num_shards > cfg.lines)
        throw ConfigError("synth: shard count must be in [1, lines]");
    if (cfg.fields < 3) throw ConfigError("synth: need >= 3 fields (source, target, id)");

    std::filesystem::create_directories(dir);
    Rng rng(splitmix64(cfg.seed));
    std::uniform_int_distribution<std::size_t> word(0, std::size(kVocab) - 1);
    std::uniform_int_distribution<std::size_t> tokens(1, 2 * cfg.mean_tokens - 1);

    std::uint64_t per_shard = cfg.lines / cfg.num_shards;
    std::uint64_t remainder = cfg.lines % cfg.num_shards;
    std::uint64_t id = 0;
    for (std::size_t s = 0; s < cfg.num_shards; ++s) {
        char name[32];
        std::snprintf(name, sizeof(name), "shard-%06zu.tsv.gz", s);
        GzLineWriter writer(dir / name);
        std::uint64_t count = per_shard + (s < remainder ? 1 : 0);
        std::string line;
        for (std::uint64_t i = 0; i < count; ++i, ++id) {
            line.clear();
            for (std::size_t f = 0; f + 1 < cfg.fields; ++f) {
                if (f) line += '\t';
                std::size_t n = tokens(rng);
                for (std::size_t t = 0; t < n; ++t) {
                    if (t) line += ' ';
                    line += kVocab[word(rng)];
                }
            }
            line += "\tid-" + std::to_string(id);
            writer.write_line(line);
        }
        writer.close();
    }
    return dir;
}

std::size_t pool_sort_key(const Record& r, const PoolConfig& cfg) {
    if (r.fields.empty()) return 0;
    const std::string& f0 = r.fields[0];
    if (!cfg.sort_by_tokens) return f0.size();
    std::size_t count = 0;
    bool in_token = false;
    for (char c : f0) {
        bool space = c == ' ' || c == '\t';
        if (!space && !in_token) ++count;
        in_token = !space;
    }
    return count;
}

Stream<RecordGroup> dual_pool_consumer(RecordStream input, const PoolConfig& cfg) {
    if (cfg.batch_size == 0 || cfg.pool_capacity < cfg.batch_size)
        throw ConfigError("dual pool: need pool_capacity >= batch_size >= 1");
    if (cfg.prefetch_threads == 0) throw ConfigError("dual pool: need >= 1 prefetch thread");

    struct State {
        RecordStream input;
        PoolConfig cfg;
        std::mutex input_mutex;
        bool input_done = false;

        std::vector<Record> draining;  // sorted, being cut into batches
        std::size_t pos = 0;
        std::vector<Record> filling;
        std::vector<std::thread> fillers;

        void start_fill() {
            filling.clear();
            filling.reserve(cfg.pool_capacity);
            for (std::size_t t = 0; t < cfg.prefetch_threads; ++t)
                fillers.emplace_back([this] {
                    while (true) {
                        std::lock_guard lock(input_mutex);
                        if (input_done || filling.size() >= cfg.pool_capacity) return;
                        auto r = input();
                        if (!r) {
                            input_done = true;
                            return;
                        }
                        filling.push_back(std::move(*r));
                    }
                });
        }

        void join_fill() {
            for (auto& t : fillers) t.join();
            fillers.clear();
        }

        // Swap the filled pool in for draining, sort it, and kick off the
        // next fill.
        bool swap_pools() {
            join_fill();
            draining = std::move(filling);
            filling = {};
            pos = 0;
            if (draining.empty()) return false;  // EOF, nothing left
            if (!input_done) start_fill();
            std::stable_sort(draining.begin(), draining.end(),
                             [this](const Record& a, const Record& b) {
                                 return pool_sort_key(a, cfg) < pool_sort_key(b, cfg);
                             });
            return true;
        }

        ~State() { join_fill(); }
    };
    auto st = std::make_shared<State>();
    st->input = std::move(input);
    st->cfg = cfg;
    st->start_fill();

    return [st]() -> std::optional<RecordGroup> {
        if (st->pos >= st->draining.size() && !st->swap_pools()) return std::nullopt;
        std::size_t end = std::min(st->pos + st->cfg.batch_size, st->draining.size());
        RecordGroup batch;
        batch.reserve(end - st->pos);
        for (std::size_t i = st->pos; i < end; ++i) batch.push_back(std::move(st->draining[i]));
        st->pos = end;
        return batch;
    };
}

std::uint64_t baseline_decompress(const DataSource& source, std::FILE* out) {
    std::vector<char> buf(1 << 16);
    std::uint64_t total = 0;
    for (const auto& shard : source.shards()) {
        GzLineReader reader(shard.path);
        std::size_t n;
        while ((n = reader.read_raw(buf.data(), buf.size())) > 0) {
            if (std::fwrite(buf.data(), 1, n, out) != n)
                throw DataError("writing decompressed output");
            total += n;
        }
    }
    return total;
}

ThroughputReport baseline_decompress_rate(const DataSource& source) {
    std::vector<char> buf(1 << 16);
    std::uint64_t lines = 0;
    auto start = Clock::now();
    for (const auto& shard : source.shards()) {
        GzLineReader reader(shard.path);
        std::size_t n;
        while ((n = reader.read_raw(buf.data(), buf.size())) > 0) {
            const char* p = buf.data();
            const char* end = p + n;
            while ((p = static_cast<const char*>(std::memchr(p, '\n', end - p)))) {
                ++lines;
                ++p;
            }
        }
    }
    return finish_report("baseline_decompress", lines, seconds_since(start));
}

}  // namespace streamgen::bench
