#include "test_util.hpp"

#include <random>

#include "streamgen/gzio.hpp"

namespace fs = std::filesystem;

namespace streamgen::test {

TempDir::TempDir() {
    auto base = fs::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto candidate = base / ("streamgen-test-" + std::to_string(rd()));
        if (fs::create_directories(candidate)) {
            path_ = candidate;
            return;
        }
    }
    throw std::runtime_error("could not create temp directory");
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

void write_lines(const fs::path& file, const std::vector<std::string>& lines) {
    GzLineWriter writer(file);
    for (const auto& line : lines) writer.write_line(line);
    writer.close();
}

std::vector<std::string> read_lines(const fs::path& file) {
    GzLineReader reader(file);
    std::vector<std::string> lines;
    while (auto line = reader.next_line()) lines.push_back(std::move(*line));
    return lines;
}

fs::path make_id_corpus(const fs::path& dir, std::size_t num_shards, std::size_t per_shard) {
    fs::create_directories(dir);
    std::size_t id = 0;
    for (std::size_t s = 0; s < num_shards; ++s) {
        char name[64];
        std::snprintf(name, sizeof(name), "shard-%02zu.tsv.gz", s);
        std::vector<std::string> lines;
        lines.reserve(per_shard);
        for (std::size_t i = 0; i < per_shard; ++i, ++id)
            lines.push_back("src-" + std::to_string(id) + "\ttgt-" + std::to_string(id) +
                            "\tid-" + std::to_string(id));
        write_lines(dir / name, lines);
    }
    return dir;
}

std::map<std::string, std::size_t> field_histogram(const std::vector<Record>& records,
                                                   std::size_t field) {
    std::map<std::string, std::size_t> hist;
    for (const auto& r : records)
        if (field < r.fields.size()) ++hist[r.fields[field]];
    return hist;
}

}  // namespace streamgen::test
