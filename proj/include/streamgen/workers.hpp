#pragma once

#include <cstdint>
#include <vector>

#include "streamgen/pipeline.hpp"
#include "streamgen/stream.hpp"

namespace streamgen {

/// Parallel-generation plan: how many workers, how many lines the merger
/// reads from each per turn, and the base seed from which per-worker seeds
/// are derived.
struct WorkerPlan {
    std::size_t num_workers = 1;
    std::size_t chunk_size = 1000;
    std::uint64_t seed = 0;
};

/// Round-robin shard partition: worker w gets indices {w, w+n, w+2n, ...}.
/// A worker that would receive no shards is a ConfigError telling the user
/// to lower the worker count or shard finer.
std::vector<std::vector<std::size_t>> partition_shards(std::size_t num_shards,
                                                       std::size_t num_workers);

/// The seed a given worker runs with.
std::uint64_t worker_seed(std::uint64_t base_seed, std::size_t worker_index);

/// Runs one pipeline stream per worker over its round-robin shard partition
/// and merges them by reading `chunk_size` records from each worker in turn,
/// starting with worker 0. The merge order is deterministic for a fixed
/// (spec, plan). Bounded queues give backpressure: a stalled consumer stalls
/// generation instead of growing memory.
///
/// A worker error (bad data, I/O) flushes that worker's partial chunk and
/// then surfaces as an exception from the merged stream. Dropping the
/// returned stream shuts the workers down.
RecordStream run_workers(const PipelineSpec& spec, const WorkerPlan& plan);

}  // namespace streamgen
