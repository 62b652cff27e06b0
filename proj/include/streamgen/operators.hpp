#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "streamgen/rng.hpp"
#include "streamgen/stream.hpp"

namespace streamgen {

/// A per-record transformation applied by mix_variants.
using RecordFn = std::function<Record(Record&&)>;

/// Drop counter for a filter, reported on stderr at shutdown so silent data
/// loss stays diagnosable. Shared between the filter closure and whoever
/// reports it.
class FilterStats {
public:
    explicit FilterStats(std::string name) : name_(std::move(name)) {}

    void count_drop() { dropped_.fetch_add(1, std::memory_order_relaxed); }
    std::uint64_t dropped() const { return dropped_.load(std::memory_order_relaxed); }
    const std::string& name() const { return name_; }

    /// Registers a stats object for end-of-run reporting.
    static void track(std::shared_ptr<FilterStats> stats);
    /// Writes one line per tracked filter with a nonzero drop count.
    static void report(std::FILE* out);
    static void reset_tracking();

private:
    std::string name_;
    std::atomic<std::uint64_t> dropped_{0};
};

/// Interleaves the given streams: each output record is pulled from a stream
/// chosen by a categorical draw over the normalized weights. If a finite
/// stream is exhausted its weight is redistributed proportionally over the
/// remaining streams; the output ends when all inputs are exhausted.
/// Throws ConfigError for a length mismatch or all-zero weights.
RecordStream mix(std::vector<RecordStream> streams, std::vector<double> weights, Rng rng);

/// Per-record variant mixing, the Figure-2 "mix a stream with transformed
/// views of itself" pattern: each upstream record is consumed exactly once
/// and exactly one of the `variants` is applied to it, chosen categorically
/// by the normalized weights. variants[i] == nullptr means identity.
RecordStream mix_variants(RecordStream upstream, std::vector<RecordFn> variants,
                          std::vector<double> weights, Rng rng);

/// Lowercases field 0; all other fields pass through unchanged.
RecordStream lower_case_source(RecordStream upstream);
Record lower_case_source_record(Record&& r);

/// Title-cases fields 0 and 1; fields 2+ pass through. A record with fewer
/// than two fields is a DataError naming the operator and record ordinal.
RecordStream title_case_both(RecordStream upstream);
Record title_case_both_record(Record&& r, std::size_t ordinal = 0);

/// Prepends "tag " to field 0. The tag must be nonempty and free of tabs and
/// newlines (ConfigError otherwise).
RecordStream tag_source(RecordStream upstream, const std::string& tag);

/// Keeps only records where the multiset of regex matches in field
/// `field_a` equals the multiset of matches in field `field_b`; everything
/// else is dropped and counted in `stats`. The pattern is validated at
/// construction (ConfigError).
RecordStream match_filter(RecordStream upstream, const std::string& pattern,
                          std::size_t field_a = 0, std::size_t field_b = 1,
                          std::shared_ptr<FilterStats> stats = nullptr);

/// Groups consecutive records sharing the same value in `docid_field`;
/// boundaries fall exactly where the docid changes, and the final partial
/// group is emitted at end of input.
GroupStream group_documents(RecordStream upstream, std::size_t docid_field = 2);

/// Splits each group into chunks of at most `max_sentences` records and
/// joins each chunk into a single record: field 0 = separator-joined
/// sources, field 1 = separator-joined targets.
RecordStream concat_documents(GroupStream groups, std::size_t max_sentences,
                              const std::string& separator);

}  // namespace streamgen
