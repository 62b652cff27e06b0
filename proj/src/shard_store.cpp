#include "streamgen/shard_store.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "streamgen/errors.hpp"
#include "streamgen/gzio.hpp"
#include "streamgen/rng.hpp"

namespace fs = std::filesystem;

namespace streamgen {

namespace {

bool is_shard_file(const fs::path& p) {
    auto name = p.filename().string();
    return name.ends_with(".tsv.gz") || name.ends_with(".tsv");
}

std::string shard_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "shard-%06zu.tsv.gz", index);
    return buf;
}

}  // namespace

fs::path default_cache_root() {
    if (const char* env = std::getenv("STREAMGEN_CACHE")) return env;
    if (const char* xdg = std::getenv("XDG_CACHE_HOME")) return fs::path(xdg) / "streamgen";
    if (const char* home = std::getenv("HOME")) return fs::path(home) / ".cache" / "streamgen";
    return fs::temp_directory_path() / "streamgen-cache";
}

fs::path auto_shard(const fs::path& file, const ShardCacheConfig& cache) {
    if (!fs::exists(file)) throw ConfigError("no such file: " + file.string());
    if (cache.shard_size == 0) throw ConfigError("shard size must be positive");

    fs::path root = cache.cache_root.empty() ? default_cache_root() : cache.cache_root;
    std::string digest = md5_file(file);
    fs::path dir = root / (digest + "-" + std::to_string(cache.shard_size));
    fs::path manifest_path = dir / "manifest.json";

    if (fs::exists(manifest_path)) {
        std::ifstream in(manifest_path);
        auto manifest = nlohmann::json::parse(in, nullptr, /*allow_exceptions=*/false);
        if (!manifest.is_discarded() && manifest.value("checksum", "") == digest &&
            manifest.value("shard_size", std::size_t{0}) == cache.shard_size)
            return dir;
        // Stale or corrupt entry; rebuild it.
        fs::remove_all(dir);
    }

    fs::path tmp = dir;
    tmp += ".tmp";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    GzLineReader reader(file);
    std::size_t total_lines = 0;
    std::size_t shard_count = 0;
    std::optional<GzLineWriter> writer;
    std::size_t lines_in_shard = 0;
    while (auto line = reader.next_line()) {
        if (!writer) {
            writer.emplace(tmp / shard_name(shard_count));
            ++shard_count;
            lines_in_shard = 0;
        }
        writer->write_line(*line);
        ++total_lines;
        if (++lines_in_shard == cache.shard_size) {
            writer->close();
            writer.reset();
        }
    }
    if (writer) writer->close();
    if (total_lines == 0) {
        fs::remove_all(tmp);
        throw DataError("empty data source: " + file.string());
    }

    nlohmann::json manifest{
        {"original_path", fs::absolute(file).string()},
        {"checksum", digest},
        {"checksum_algorithm", "md5"},
        {"shard_size", cache.shard_size},
        {"shard_count", shard_count},
        {"lines", total_lines},
    };
    {
        std::ofstream out(tmp / "manifest.json");
        out << manifest.dump(2) << '\n';
    }

    fs::create_directories(root);
    fs::rename(tmp, dir);
    return dir;
}

std::shared_ptr<const DataSource> DataSource::open(const fs::path& root,
                                                   const ShardCacheConfig& cache) {
    if (!fs::exists(root)) throw ConfigError("no such path: " + root.string());

    fs::path dir = root;
    if (fs::is_regular_file(root)) dir = auto_shard(root, cache);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && is_shard_file(entry.path()))
            files.push_back(entry.path());
    if (files.empty())
        throw ConfigError("no *.tsv.gz or *.tsv shards in " + dir.string());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    auto source = std::shared_ptr<DataSource>(new DataSource());
    source->id_ = root.string();
    source->shards_.reserve(files.size());
    for (std::size_t i = 0; i < files.size(); ++i)
        source->shards_.push_back(Shard{files[i], i, source->id_});
    return source;
}

std::shared_ptr<const DataSource> DataSource::filtered(
    const std::function<bool(std::size_t)>& keep) const {
    auto view = std::shared_ptr<DataSource>(new DataSource());
    view->id_ = id_;
    for (const auto& shard : shards_)
        if (keep(shard.index)) view->shards_.push_back(shard);
    if (view->shards_.empty())
        throw ConfigError("shard filter leaves no shards for source " + id_);
    return view;
}

Stream<Shard> shard_permutation_stream(std::shared_ptr<const DataSource> source,
                                       std::uint64_t seed) {
    struct State {
        std::shared_ptr<const DataSource> source;
        Rng rng;
        std::vector<std::size_t> order;
        std::size_t pos;
    };
    auto st = std::make_shared<State>();
    st->source = std::move(source);
    st->rng.seed(splitmix64(seed));
    st->order.resize(st->source->shards().size());
    for (std::size_t i = 0; i < st->order.size(); ++i) st->order[i] = i;
    st->pos = st->order.size();  // force a shuffle on the first pull

    return [st]() -> std::optional<Shard> {
        if (st->pos >= st->order.size()) {
            std::shuffle(st->order.begin(), st->order.end(), st->rng);
            st->pos = 0;
        }
        return st->source->shards()[st->order[st->pos++]];
    };
}

RecordStream read_shard(const Shard& shard) {
    auto reader = std::make_shared<GzLineReader>(shard.path);
    return [reader]() -> std::optional<Record> {
        auto line = reader->next_line();
        if (!line) return std::nullopt;
        try {
            return parse(*line);
        } catch (const MalformedInputError& e) {
            throw DataError(reader->path().string() + ":" +
                            std::to_string(reader->line_number()) + ": " + e.what());
        }
    };
}

RecordStream shuffled_record_stream(std::shared_ptr<const DataSource> source,
                                    std::uint64_t seed) {
    struct State {
        Stream<Shard> shards;
        Rng rng;
        std::vector<Record> buffer;
        std::size_t pos = 0;
        std::size_t empty_streak = 0;
        std::size_t num_shards = 0;
    };
    auto st = std::make_shared<State>();
    st->num_shards = source->shards().size();
    st->shards = shard_permutation_stream(std::move(source), derive_seed(seed, 0));
    st->rng.seed(derive_seed(seed, 1));

    return [st]() -> std::optional<Record> {
        while (st->pos >= st->buffer.size()) {
            auto shard = st->shards();
            st->buffer.clear();
            st->pos = 0;
            auto records = read_shard(*shard);
            while (auto r = records()) st->buffer.push_back(std::move(*r));
            if (st->buffer.empty()) {
                // A whole epoch of empty shards means the source has no data.
                if (++st->empty_streak > st->num_shards)
                    throw DataError("data source " + shard->source_id + " contains no records");
                continue;
            }
            st->empty_streak = 0;
            std::shuffle(st->buffer.begin(), st->buffer.end(), st->rng);
        }
        return std::move(st->buffer[st->pos++]);
    };
}

}  // namespace streamgen
