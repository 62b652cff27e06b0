#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "streamgen/shard_store.hpp"
#include "streamgen/stream.hpp"

namespace streamgen {

/// Everything needed to instantiate a pipeline: which recipe, which data
/// sources, how to mix them, and recipe-specific parameters. Immutable and
/// shareable; each worker builds its own stream from it.
struct PipelineSpec {
    std::string name;
    std::vector<std::filesystem::path> sources;
    std::vector<double> mix_weights;  // empty = uniform over sources
    std::uint64_t seed = 0;
    std::map<std::string, std::string> params;
    ShardCacheConfig cache;  // shard size + cache root for auto-sharding
};

/// Worker-local build inputs: the worker's derived seed, its shard partition
/// (null filter = all shards), and optionally pre-opened sources shared with
/// other workers.
struct BuildContext {
    std::uint64_t seed = 0;
    std::function<bool(std::size_t)> shard_filter;  // by shard index
    std::vector<std::shared_ptr<const DataSource>> sources;  // empty = open from spec
};

using PipelineBuilder = std::function<RecordStream(const PipelineSpec&, const BuildContext&)>;

/// Registers a pipeline recipe under `name`, taking exactly `arity` data
/// sources. Duplicate names are a ConfigError.
void register_pipeline(const std::string& name, std::size_t arity, PipelineBuilder builder);

/// Names of all registered pipelines, sorted.
std::vector<std::string> registered_pipelines();

/// True if `name` resolves.
bool pipeline_exists(const std::string& name);

/// Resolves the spec's pipeline, validates arity and mix weights, and builds
/// the record stream. Unknown names raise a ConfigError that lists the
/// registered pipelines.
RecordStream build_stream(const PipelineSpec& spec, const BuildContext& ctx = {});

/// Opens (or reuses from ctx) the spec's data sources, with the context's
/// shard filter applied. Intended for pipeline builders.
std::vector<std::shared_ptr<const DataSource>> open_sources(const PipelineSpec& spec,
                                                            const BuildContext& ctx);

/// The spec's mix weights, defaulting to uniform when none are given.
std::vector<double> effective_mix_weights(const PipelineSpec& spec);

/// Registers the built-in recipes ("default", "robust-case"). Called once by
/// the CLI and by tests; repeated calls are a no-op.
void register_builtin_pipelines();

}  // namespace streamgen
