#include "streamgen/pipeline.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

#include "streamgen/errors.hpp"

namespace streamgen {

namespace {

struct Entry {
    std::size_t arity;
    PipelineBuilder builder;
};

std::mutex g_registry_mutex;
std::map<std::string, Entry>& registry() {
    static std::map<std::string, Entry> r;
    return r;
}

}  // namespace

void register_pipeline(const std::string& name, std::size_t arity, PipelineBuilder builder) {
    std::lock_guard lock(g_registry_mutex);
    auto [it, inserted] = registry().emplace(name, Entry{arity, std::move(builder)});
    if (!inserted) throw ConfigError("pipeline \"" + name + "\" is already registered");
}

std::vector<std::string> registered_pipelines() {
    std::lock_guard lock(g_registry_mutex);
    std::vector<std::string> names;
    for (const auto& [name, entry] : registry()) names.push_back(name);
    return names;  // std::map iterates in sorted order
}

bool pipeline_exists(const std::string& name) {
    std::lock_guard lock(g_registry_mutex);
    return registry().count(name) > 0;
}

RecordStream build_stream(const PipelineSpec& spec, const BuildContext& ctx) {
    Entry entry;
    {
        std::lock_guard lock(g_registry_mutex);
        auto it = registry().find(spec.name);
        if (it == registry().end()) {
            std::ostringstream msg;
            msg << "unknown pipeline \"" << spec.name << "\"; registered pipelines:";
            for (const auto& [name, e] : registry()) msg << ' ' << name;
            throw ConfigError(msg.str());
        }
        entry = it->second;
    }
    if (spec.sources.size() != entry.arity)
        throw ConfigError("pipeline \"" + spec.name + "\" takes " +
                          std::to_string(entry.arity) + " data source(s), got " +
                          std::to_string(spec.sources.size()));
    if (!spec.mix_weights.empty() && spec.mix_weights.size() != spec.sources.size())
        throw ConfigError("got " + std::to_string(spec.mix_weights.size()) +
                          " mix weights for " + std::to_string(spec.sources.size()) +
                          " source(s)");
    return entry.builder(spec, ctx);
}

std::vector<std::shared_ptr<const DataSource>> open_sources(const PipelineSpec& spec,
                                                            const BuildContext& ctx) {
    std::vector<std::shared_ptr<const DataSource>> sources;
    if (!ctx.sources.empty()) {
        if (ctx.sources.size() != spec.sources.size())
            throw ConfigError("context provides " + std::to_string(ctx.sources.size()) +
                              " opened source(s) for " + std::to_string(spec.sources.size()) +
                              " paths");
        sources = ctx.sources;
    } else {
        sources.reserve(spec.sources.size());
        for (const auto& path : spec.sources)
            sources.push_back(DataSource::open(path, spec.cache));
    }
    if (ctx.shard_filter)
        for (auto& s : sources) s = s->filtered(ctx.shard_filter);
    return sources;
}

std::vector<double> effective_mix_weights(const PipelineSpec& spec) {
    if (!spec.mix_weights.empty()) return spec.mix_weights;
    return std::vector<double>(spec.sources.size(), 1.0);
}

}  // namespace streamgen
