#include "streamgen/workers.hpp"

#include <condition_variable>
#include <cstdio>
#include <deque>
#include <exception>
#include <mutex>
#include <thread>

#include "streamgen/errors.hpp"
#include "streamgen/rng.hpp"

namespace streamgen {

namespace {

// Bounded queue of record chunks. Capacity is counted in chunks; with
// kQueueChunks = 4 each worker buffers at most 4 x chunk_size records.
constexpr std::size_t kQueueChunks = 4;

class ChunkQueue {
public:
    // Blocks while full. Returns false if the consumer closed the queue.
    bool push(std::vector<Record>&& chunk) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return chunks_.size() < kQueueChunks || closed_; });
        if (closed_) return false;
        chunks_.push_back(std::move(chunk));
        not_empty_.notify_one();
        return true;
    }

    // Blocks while empty. nullopt means the producer finished; a stored
    // error is rethrown.
    std::optional<std::vector<Record>> pop() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return !chunks_.empty() || done_ || error_; });
        if (chunks_.empty()) {
            if (error_) std::rethrow_exception(error_);
            return std::nullopt;
        }
        auto chunk = std::move(chunks_.front());
        chunks_.pop_front();
        not_full_.notify_one();
        return chunk;
    }

    void finish() {  // producer side: no more chunks
        std::lock_guard lock(mutex_);
        done_ = true;
        not_empty_.notify_all();
    }

    void fail(std::exception_ptr e) {
        std::lock_guard lock(mutex_);
        error_ = std::move(e);
        done_ = true;
        not_empty_.notify_all();
    }

    void close() {  // consumer side: shutting down
        std::lock_guard lock(mutex_);
        closed_ = true;
        not_full_.notify_all();
        not_empty_.notify_all();
    }

private:
    std::mutex mutex_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    std::deque<std::vector<Record>> chunks_;
    bool closed_ = false;
    bool done_ = false;
    std::exception_ptr error_;
};

struct WorkerPool {
    std::vector<std::unique_ptr<ChunkQueue>> queues;
    std::vector<std::thread> threads;

    ~WorkerPool() {
        for (auto& q : queues) q->close();
        for (auto& t : threads)
            if (t.joinable()) t.join();
    }
};

void worker_main(const PipelineSpec spec, BuildContext ctx, std::size_t chunk_size,
                 ChunkQueue& queue) {
    std::vector<Record> chunk;
    chunk.reserve(chunk_size);
    try {
        auto stream = build_stream(spec, ctx);
        while (true) {
            auto r = stream();
            if (!r) break;
            chunk.push_back(std::move(*r));
            if (chunk.size() == chunk_size) {
                if (!queue.push(std::move(chunk))) return;  // consumer gone
                chunk = {};
                chunk.reserve(chunk_size);
            }
        }
        if (!chunk.empty()) queue.push(std::move(chunk));
        queue.finish();
    } catch (...) {
        // Flush what we have so already-produced records are not lost, then
        // surface the error.
        if (!chunk.empty()) queue.push(std::move(chunk));
        queue.fail(std::current_exception());
    }
}

}  // namespace

std::vector<std::vector<std::size_t>> partition_shards(std::size_t num_shards,
                                                       std::size_t num_workers) {
    if (num_workers == 0) throw ConfigError("need at least one worker");
    if (num_shards == 0) throw ConfigError("need at least one shard");
    if (num_workers > num_shards)
        throw ConfigError(std::to_string(num_workers) + " workers but only " +
                          std::to_string(num_shards) +
                          " shard(s); lower the worker count or use a smaller --shard-size");
    std::vector<std::vector<std::size_t>> partitions(num_workers);
    for (std::size_t i = 0; i < num_shards; ++i) partitions[i % num_workers].push_back(i);
    return partitions;
}

std::uint64_t worker_seed(std::uint64_t base_seed, std::size_t worker_index) {
    return derive_seed(base_seed, 0x57a7e000ULL + worker_index);
}

RecordStream run_workers(const PipelineSpec& spec, const WorkerPlan& plan) {
    if (plan.num_workers == 0) throw ConfigError("need at least one worker");
    if (plan.chunk_size == 0) throw ConfigError("chunk size must be positive");

    // Open the sources once up front: validates the paths, populates the
    // auto-shard cache exactly once, and lets the workers share the
    // immutable shard lists.
    BuildContext probe;
    auto sources = open_sources(spec, probe);
    for (const auto& src : sources) {
        partition_shards(src->shards().size(), plan.num_workers);  // throws if too few
        if (src->shards().size() % plan.num_workers != 0)
            std::fprintf(stderr,
                         "warning: %zu workers do not evenly divide %zu shards of %s; "
                         "one-epoch global permutation is weakened\n",
                         plan.num_workers, src->shards().size(), src->id().c_str());
    }

    auto pool = std::make_shared<WorkerPool>();
    for (std::size_t w = 0; w < plan.num_workers; ++w)
        pool->queues.push_back(std::make_unique<ChunkQueue>());
    for (std::size_t w = 0; w < plan.num_workers; ++w) {
        BuildContext ctx;
        ctx.seed = worker_seed(plan.seed, w);
        ctx.sources = sources;
        std::size_t n = plan.num_workers;
        ctx.shard_filter = [w, n](std::size_t index) { return index % n == w; };
        pool->threads.emplace_back(worker_main, spec, std::move(ctx), plan.chunk_size,
                                   std::ref(*pool->queues[w]));
    }

    struct MergeState {
        std::shared_ptr<WorkerPool> pool;
        std::vector<bool> exhausted;
        std::size_t turn = 0;
        std::vector<Record> chunk;
        std::size_t pos = 0;
        std::size_t live;
    };
    auto st = std::make_shared<MergeState>();
    st->pool = std::move(pool);
    st->exhausted.assign(plan.num_workers, false);
    st->live = plan.num_workers;

    return [st]() -> std::optional<Record> {
        while (st->pos >= st->chunk.size()) {
            if (st->live == 0) return std::nullopt;
            while (st->exhausted[st->turn]) st->turn = (st->turn + 1) % st->exhausted.size();
            auto chunk = st->pool->queues[st->turn]->pop();
            if (!chunk) {
                st->exhausted[st->turn] = true;
                --st->live;
                st->turn = (st->turn + 1) % st->exhausted.size();
                continue;
            }
            st->chunk = std::move(*chunk);
            st->pos = 0;
            st->turn = (st->turn + 1) % st->exhausted.size();
        }
        return std::move(st->chunk[st->pos++]);
    };
}

}  // namespace streamgen
