#include <mutex>
#include <sstream>

#include "streamgen/errors.hpp"
#include "streamgen/operators.hpp"
#include "streamgen/pipeline.hpp"
#include "streamgen/rng.hpp"

namespace streamgen {

namespace {

// Seed-derivation stream ids. Keeping the top-level mixer and the per-source
// chains on disjoint ids means adding a source or an operator never perturbs
// the draws of the others.
constexpr std::uint64_t kTopMixId = 1;
constexpr std::uint64_t kSourceStreamBase = 100;
constexpr std::uint64_t kCaseMixBase = 200;

std::vector<double> parse_weight_list(const std::string& text, const std::string& what) {
    std::istringstream in(text);
    std::vector<double> out;
    double w;
    while (in >> w) out.push_back(w);
    if (!in.eof()) throw ConfigError("bad " + what + ": \"" + text + "\"");
    return out;
}

// Applies the Figure-2 style case mixer: identity / lowercased source /
// title-cased both sides, one variant per record.
RecordStream case_mix(RecordStream upstream, const std::vector<double>& weights, Rng rng) {
    std::vector<RecordFn> variants{
        nullptr,  // identity
        [](Record&& r) { return lower_case_source_record(std::move(r)); },
        [](Record&& r) { return title_case_both_record(std::move(r)); },
    };
    return mix_variants(std::move(upstream), std::move(variants), weights, rng);
}

RecordStream build_default(const PipelineSpec& spec, const BuildContext& ctx) {
    auto sources = open_sources(spec, ctx);
    return shuffled_record_stream(sources[0], derive_seed(ctx.seed, kSourceStreamBase));
}

RecordStream build_robust_case(const PipelineSpec& spec, const BuildContext& ctx) {
    std::vector<double> case_weights{0.95, 0.04, 0.01};
    if (auto it = spec.params.find("case-weights"); it != spec.params.end()) {
        case_weights = parse_weight_list(it->second, "case-weights");
        if (case_weights.size() != 3)
            throw ConfigError("case-weights needs 3 values (identity, lowercase, titlecase)");
    }
    std::string tag = "[BT]";
    if (auto it = spec.params.find("tag"); it != spec.params.end()) tag = it->second;

    auto sources = open_sources(spec, ctx);  // [parallel, backtranslated]
    std::vector<RecordStream> streams;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        auto s = shuffled_record_stream(sources[i], derive_seed(ctx.seed, kSourceStreamBase + i));
        s = case_mix(std::move(s), case_weights, Rng(derive_seed(ctx.seed, kCaseMixBase + i)));
        if (i == 1) s = tag_source(std::move(s), tag);  // tag only the BT side
        streams.push_back(std::move(s));
    }
    return mix(std::move(streams), effective_mix_weights(spec),
               Rng(derive_seed(ctx.seed, kTopMixId)));
}

}  // namespace

void register_builtin_pipelines() {
    static std::once_flag once;
    std::call_once(once, [] {
        register_pipeline("default", 1, build_default);
        register_pipeline("robust-case", 2, build_robust_case);
    });
}

}  // namespace streamgen
