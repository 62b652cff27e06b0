#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace streamgen {

/// Buffered line reader over a gzip file. Plain (uncompressed) files are
/// read transparently, which is how bare .tsv inputs are supported.
/// Returned lines have the trailing '\n' stripped; '\r' handling is left to
/// the record parser.
class GzLineReader {
public:
    explicit GzLineReader(const std::filesystem::path& path);
    ~GzLineReader();

    GzLineReader(GzLineReader&&) noexcept;
    GzLineReader& operator=(GzLineReader&&) noexcept;
    GzLineReader(const GzLineReader&) = delete;
    GzLineReader& operator=(const GzLineReader&) = delete;

    /// Next line, or nullopt at EOF. Throws DataError on decompression
    /// failure. A final line without a terminating '\n' is still returned.
    std::optional<std::string> next_line();

    /// Reads up to `n` raw decompressed bytes into `buf`; returns the count,
    /// 0 at EOF. Used by the baseline producer, which skips line parsing.
    std::size_t read_raw(char* buf, std::size_t n);

    const std::filesystem::path& path() const;
    std::size_t line_number() const;  // 1-based number of the last line returned

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Gzip line writer; output is deterministic for fixed input (zlib writes a
/// zero mtime). Writing to a path ending in .tsv produces a plain file.
class GzLineWriter {
public:
    explicit GzLineWriter(const std::filesystem::path& path);
    ~GzLineWriter();

    GzLineWriter(GzLineWriter&&) noexcept;
    GzLineWriter& operator=(GzLineWriter&&) noexcept;
    GzLineWriter(const GzLineWriter&) = delete;
    GzLineWriter& operator=(const GzLineWriter&) = delete;

    void write_line(std::string_view line);
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// MD5 digest of a file's raw (compressed) bytes, as a lowercase hex string.
std::string md5_file(const std::filesystem::path& path);

}  // namespace streamgen
