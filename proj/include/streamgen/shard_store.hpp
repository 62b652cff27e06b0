#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "streamgen/stream.hpp"

namespace streamgen {

/// One compressed TSV file plus its position within its data source.
struct Shard {
    std::filesystem::path path;
    std::size_t index = 0;       // ordinal within the source, 0-based
    std::string source_id;       // identifier of the owning DataSource
};

/// Settings for the automatic-sharding cache used when a data source is a
/// single monolithic file rather than a directory of shards.
struct ShardCacheConfig {
    std::filesystem::path cache_root;  // empty = default_cache_root()
    std::size_t shard_size = 1'000'000;  // lines per shard
};

std::filesystem::path default_cache_root();

/// Splits a monolithic compressed TSV file into gzip shards of
/// `cache.shard_size` lines under the cache, keyed by the MD5 checksum of
/// the compressed input. Concatenating the shards in index order reproduces
/// the decompressed input byte-for-byte. On a cache hit (same checksum and
/// shard size) the existing directory is returned without any writes.
/// A zero-line input is an error.
std::filesystem::path auto_shard(const std::filesystem::path& file, const ShardCacheConfig& cache);

/// A directory of shards treated as one logical corpus. Immutable after
/// open; safe to share read-only across workers.
class DataSource {
public:
    /// Opens `root`: a directory containing *.tsv.gz / *.tsv shards (ordered
    /// lexicographically by filename), or a single compressed TSV file,
    /// which is auto-sharded first. Throws ConfigError for a missing path or
    /// a directory with no matching files.
    static std::shared_ptr<const DataSource> open(const std::filesystem::path& root,
                                                  const ShardCacheConfig& cache = {});

    const std::vector<Shard>& shards() const { return shards_; }
    const std::string& id() const { return id_; }

    /// A view holding only the shards whose index passes `keep`; used for
    /// per-worker round-robin partitions. Throws ConfigError if nothing
    /// survives.
    std::shared_ptr<const DataSource> filtered(
        const std::function<bool(std::size_t)>& keep) const;

private:
    DataSource() = default;
    std::vector<Shard> shards_;
    std::string id_;
};

/// Infinite stream of shards: each epoch is an independent uniform
/// permutation of the source's shard list, drawn from a deterministic RNG.
/// No shard appears n+1 times until every shard has appeared n times.
Stream<Shard> shard_permutation_stream(std::shared_ptr<const DataSource> source,
                                       std::uint64_t seed);

/// Records of one shard in file order. Parse errors carry the shard path and
/// line number.
RecordStream read_shard(const Shard& shard);

/// The default per-source processor: follows the shard permutation stream,
/// reads each shard fully, shuffles its records in memory, and emits them.
/// One pass over every shard yields an exact permutation of the source.
RecordStream shuffled_record_stream(std::shared_ptr<const DataSource> source,
                                    std::uint64_t seed);

}  // namespace streamgen
