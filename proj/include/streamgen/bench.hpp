#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>

#include "streamgen/shard_store.hpp"
#include "streamgen/stream.hpp"

namespace streamgen::bench {

struct ThroughputReport {
    std::string producer;
    std::size_t num_workers = 1;
    std::uint64_t lines = 0;
    std::uint64_t malformed_lines = 0;  // counted separately, never rejected
    double wall_seconds = 0.0;
    double lines_per_second = 0.0;
};

/// Reads `in` to EOF counting newline-terminated lines, reporting cumulative
/// and interval rates on `diag` every `report_interval` seconds (0 = no
/// interim reports). Lines that are not valid UTF-8 are counted separately.
ThroughputReport count_consumer(std::FILE* in, double report_interval, std::FILE* diag);

/// Pulls up to `lines` records from `stream` and returns the steady-state
/// rate; the first `warmup` records are excluded from the timing.
ThroughputReport measure_stream_rate(RecordStream& stream, std::uint64_t lines,
                                     std::uint64_t warmup = 0);

struct SynthConfig {
    std::uint64_t lines = 0;
    std::size_t num_shards = 1;
    std::size_t fields = 3;      // >= 3; the last field carries the unique id
    std::size_t mean_tokens = 10;
    std::uint64_t seed = 0;
};

/// Writes a deterministic gzip-sharded TSV corpus under `dir` and returns
/// `dir`. Each record carries a unique id ("id-<n>") in its last field so
/// tests can check permutation properties. Same config = byte-identical
/// shards.
std::filesystem::path synth_corpus(const std::filesystem::path& dir, const SynthConfig& cfg);

struct PoolConfig {
    std::size_t pool_capacity = 1024;  // records per pool
    std::size_t prefetch_threads = 1;
    std::size_t batch_size = 64;
    bool sort_by_tokens = true;  // false = sort by byte length of field 0
};

/// Sort key used when a pool is batched.
std::size_t pool_sort_key(const Record& r, const PoolConfig& cfg);

/// Models the trainer side of the pipe: two pools alternate between being
/// filled by prefetch threads and being sorted (by field-0 length) and cut
/// into batches. Every input record lands in exactly one batch; EOF flushes
/// both pools. Requires pool_capacity >= batch_size >= 1.
Stream<RecordGroup> dual_pool_consumer(RecordStream input, const PoolConfig& cfg);

/// Sequentially decompresses the source's shards to `out`, byte-for-byte,
/// with no parsing or permutation: the upper-bound producer. Returns the
/// number of bytes written.
std::uint64_t baseline_decompress(const DataSource& source, std::FILE* out);

/// Same decompression loop but only counting lines, for in-process rate
/// measurement without stdout in the way.
ThroughputReport baseline_decompress_rate(const DataSource& source);

}  // namespace streamgen::bench
