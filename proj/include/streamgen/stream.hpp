#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "streamgen/record.hpp"

namespace streamgen {

/// A pull-based lazy stream: each call yields the next item, or nullopt at
/// the end. Streams are single-consumer; operators compose by wrapping one
/// stream in another.
template <typename T>
using Stream = std::function<std::optional<T>()>;

using RecordStream = Stream<Record>;
using RecordGroup = std::vector<Record>;
using GroupStream = Stream<RecordGroup>;

/// Finite stream over a vector, in order.
template <typename T>
Stream<T> stream_from(std::vector<T> items) {
    return [items = std::move(items), pos = std::size_t{0}]() mutable -> std::optional<T> {
        if (pos >= items.size()) return std::nullopt;
        return std::move(items[pos++]);
    };
}

/// Drains up to `n` items into a vector (fewer if the stream ends first).
template <typename T>
std::vector<T> take(Stream<T>& s, std::size_t n) {
    std::vector<T> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto item = s();
        if (!item) break;
        out.push_back(std::move(*item));
    }
    return out;
}

}  // namespace streamgen
