#include "streamgen/operators.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <regex>
#include <set>
#include <utility>

#include "streamgen/errors.hpp"
#include "streamgen/unicode.hpp"

namespace streamgen {

namespace {

std::mutex g_stats_mutex;
std::vector<std::shared_ptr<FilterStats>> g_tracked_stats;

void check_weights(std::size_t n_streams, const std::vector<double>& weights) {
    if (n_streams == 0) throw ConfigError("mix: need at least one input stream");
    if (weights.size() != n_streams)
        throw ConfigError("mix: " + std::to_string(weights.size()) + " weights for " +
                          std::to_string(n_streams) + " streams");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ConfigError("mix: negative weight");
        total += w;
    }
    if (total <= 0.0) throw ConfigError("mix: all weights are zero");
}

}  // namespace

void FilterStats::track(std::shared_ptr<FilterStats> stats) {
    std::lock_guard lock(g_stats_mutex);
    g_tracked_stats.push_back(std::move(stats));
}

void FilterStats::report(std::FILE* out) {
    std::lock_guard lock(g_stats_mutex);
    for (const auto& s : g_tracked_stats)
        if (s->dropped() > 0)
            std::fprintf(out, "%s: dropped %llu record(s)\n", s->name().c_str(),
                         static_cast<unsigned long long>(s->dropped()));
}

void FilterStats::reset_tracking() {
    std::lock_guard lock(g_stats_mutex);
    g_tracked_stats.clear();
}

RecordStream mix(std::vector<RecordStream> streams, std::vector<double> weights, Rng rng) {
    check_weights(streams.size(), weights);

    struct State {
        std::vector<RecordStream> streams;
        std::vector<double> weights;
        std::vector<std::size_t> active;  // indices into streams
        Categorical dist;
        Rng rng;

        State(std::vector<RecordStream> s, std::vector<double> w, Rng r)
            : streams(std::move(s)), weights(std::move(w)),
              dist(std::span<const double>(weights)), rng(r) {
            for (std::size_t i = 0; i < streams.size(); ++i)
                if (weights[i] > 0.0) active.push_back(i);
            rebuild();
        }

        void rebuild() {
            if (active.empty()) return;
            std::vector<double> w;
            w.reserve(active.size());
            for (auto i : active) w.push_back(weights[i]);
            dist.reset(w);
        }
    };
    auto st = std::make_shared<State>(std::move(streams), std::move(weights), rng);

    return [st]() -> std::optional<Record> {
        while (!st->active.empty()) {
            std::size_t slot = st->active.size() == 1 ? 0 : st->dist(st->rng);
            auto r = st->streams[st->active[slot]]();
            if (r) return r;
            // Exhausted: drop it and renormalize over the survivors.
            st->active.erase(st->active.begin() + static_cast<std::ptrdiff_t>(slot));
            st->rebuild();
        }
        return std::nullopt;
    };
}

RecordStream mix_variants(RecordStream upstream, std::vector<RecordFn> variants,
                          std::vector<double> weights, Rng rng) {
    check_weights(variants.size(), weights);
    auto dist = std::make_shared<Categorical>(std::span<const double>(weights));
    auto vars = std::make_shared<std::vector<RecordFn>>(std::move(variants));
    auto rng_state = std::make_shared<Rng>(rng);

    return [upstream = std::move(upstream), dist, vars, rng_state]() -> std::optional<Record> {
        auto r = upstream();
        if (!r) return std::nullopt;
        std::size_t i = (*dist)(*rng_state);
        auto& fn = (*vars)[i];
        return fn ? fn(std::move(*r)) : std::move(*r);
    };
}

Record lower_case_source_record(Record&& r) {
    if (!r.fields.empty()) r.fields[0] = unicode::to_lower(r.fields[0]);
    return std::move(r);
}

RecordStream lower_case_source(RecordStream upstream) {
    return [upstream = std::move(upstream)]() -> std::optional<Record> {
        auto r = upstream();
        if (!r) return std::nullopt;
        return lower_case_source_record(std::move(*r));
    };
}

Record title_case_both_record(Record&& r, std::size_t ordinal) {
    if (r.fields.size() < 2)
        throw DataError("title_case_both: record " + std::to_string(ordinal) + " has " +
                        std::to_string(r.fields.size()) + " field(s), need 2");
    r.fields[0] = unicode::to_title(r.fields[0]);
    r.fields[1] = unicode::to_title(r.fields[1]);
    return std::move(r);
}

RecordStream title_case_both(RecordStream upstream) {
    return [upstream = std::move(upstream), ordinal = std::size_t{0}]() mutable
           -> std::optional<Record> {
        auto r = upstream();
        if (!r) return std::nullopt;
        return title_case_both_record(std::move(*r), ordinal++);
    };
}

RecordStream tag_source(RecordStream upstream, const std::string& tag) {
    if (tag.empty() || tag.find('\t') != std::string::npos ||
        tag.find('\n') != std::string::npos)
        throw ConfigError("tag must be nonempty and contain no tab or newline");
    return [upstream = std::move(upstream), tag]() -> std::optional<Record> {
        auto r = upstream();
        if (!r) return std::nullopt;
        if (r->fields.empty()) r->fields.emplace_back();
        r->fields[0] = tag + " " + r->fields[0];
        return r;
    };
}

RecordStream match_filter(RecordStream upstream, const std::string& pattern,
                          std::size_t field_a, std::size_t field_b,
                          std::shared_ptr<FilterStats> stats) {
    std::regex re;
    try {
        re = std::regex(pattern);
    } catch (const std::regex_error& e) {
        throw ConfigError("match_filter: bad pattern \"" + pattern + "\": " + e.what());
    }
    if (!stats) stats = std::make_shared<FilterStats>("match_filter(" + pattern + ")");
    FilterStats::track(stats);

    auto matches_of = [](const std::string& text, const std::regex& re) {
        std::multiset<std::string> out;
        for (auto it = std::sregex_iterator(text.begin(), text.end(), re);
             it != std::sregex_iterator(); ++it)
            out.insert(it->str());
        return out;
    };

    return [upstream = std::move(upstream), re = std::move(re), field_a, field_b, stats,
            matches_of]() -> std::optional<Record> {
        while (auto r = upstream()) {
            const std::string a = field_a < r->fields.size() ? r->fields[field_a] : "";
            const std::string b = field_b < r->fields.size() ? r->fields[field_b] : "";
            if (matches_of(a, re) == matches_of(b, re)) return r;
            stats->count_drop();
        }
        return std::nullopt;
    };
}

GroupStream group_documents(RecordStream upstream, std::size_t docid_field) {
    struct State {
        RecordStream upstream;
        RecordGroup pending;
        std::size_t ordinal = 0;
        bool done = false;
    };
    auto st = std::make_shared<State>();
    st->upstream = std::move(upstream);

    return [st, docid_field]() -> std::optional<RecordGroup> {
        if (st->done) return std::nullopt;
        while (true) {
            auto r = st->upstream();
            if (!r) {
                st->done = true;
                if (st->pending.empty()) return std::nullopt;
                return std::exchange(st->pending, {});
            }
            ++st->ordinal;
            if (r->fields.size() <= docid_field)
                throw DataError("group_documents: record " + std::to_string(st->ordinal - 1) +
                                " lacks field " + std::to_string(docid_field));
            if (!st->pending.empty() &&
                st->pending.back().fields[docid_field] != r->fields[docid_field]) {
                auto group = std::exchange(st->pending, {});
                st->pending.push_back(std::move(*r));
                return group;
            }
            st->pending.push_back(std::move(*r));
        }
    };
}

RecordStream concat_documents(GroupStream groups, std::size_t max_sentences,
                              const std::string& separator) {
    if (max_sentences == 0) throw ConfigError("concat_documents: max_sentences must be positive");
    if (separator.find('\t') != std::string::npos || separator.find('\n') != std::string::npos)
        throw ConfigError("concat_documents: separator contains tab or newline");

    struct State {
        GroupStream groups;
        RecordGroup group;
        std::size_t pos = 0;
    };
    auto st = std::make_shared<State>();
    st->groups = std::move(groups);

    return [st, max_sentences, separator]() -> std::optional<Record> {
        while (st->pos >= st->group.size()) {
            auto g = st->groups();
            if (!g) return std::nullopt;
            st->group = std::move(*g);
            st->pos = 0;
        }
        std::size_t end = std::min(st->pos + max_sentences, st->group.size());
        std::string source, target;
        for (std::size_t i = st->pos; i < end; ++i) {
            if (i > st->pos) {
                source += separator;
                target += separator;
            }
            const auto& f = st->group[i].fields;
            if (!f.empty()) source += f[0];
            if (f.size() > 1) target += f[1];
        }
        st->pos = end;
        return Record({std::move(source), std::move(target)});
    };
}

}  // namespace streamgen
