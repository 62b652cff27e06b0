#include "streamgen/gzio.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <vector>

#include "streamgen/errors.hpp"

namespace streamgen {

namespace {

[[noreturn]] void throw_gz_error(gzFile f, const std::filesystem::path& path,
                                 const char* action) {
    int errnum = 0;
    const char* msg = f ? gzerror(f, &errnum) : nullptr;
    std::string detail = (msg && errnum != Z_OK) ? msg : std::strerror(errno);
    throw DataError(std::string(action) + " " + path.string() + ": " + detail);
}

constexpr std::size_t kBufSize = 1 << 16;

}  // namespace

struct GzLineReader::Impl {
    gzFile file = nullptr;
    std::filesystem::path path;
    std::vector<char> buf = std::vector<char>(kBufSize);
    std::size_t pos = 0;
    std::size_t avail = 0;
    bool eof = false;
    std::size_t line_number = 0;

    bool refill() {
        if (eof) return false;
        int n = gzread(file, buf.data(), static_cast<unsigned>(buf.size()));
        if (n < 0) throw_gz_error(file, path, "reading");
        if (n == 0) {
            eof = true;
            return false;
        }
        pos = 0;
        avail = static_cast<std::size_t>(n);
        return true;
    }
};

GzLineReader::GzLineReader(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    impl_->file = gzopen(path.c_str(), "rb");
    if (!impl_->file)
        throw DataError("cannot open " + path.string() + ": " + std::strerror(errno));
    gzbuffer(impl_->file, kBufSize);
}

GzLineReader::~GzLineReader() {
    if (impl_ && impl_->file) gzclose(impl_->file);
}

GzLineReader::GzLineReader(GzLineReader&&) noexcept = default;
GzLineReader& GzLineReader::operator=(GzLineReader&&) noexcept = default;

std::optional<std::string> GzLineReader::next_line() {
    Impl& im = *impl_;
    std::string line;
    bool any = false;
    while (true) {
        if (im.pos >= im.avail && !im.refill()) break;
        char* start = im.buf.data() + im.pos;
        std::size_t len = im.avail - im.pos;
        if (auto* nl = static_cast<char*>(std::memchr(start, '\n', len))) {
            line.append(start, nl);
            im.pos += static_cast<std::size_t>(nl - start) + 1;
            ++im.line_number;
            return line;
        }
        line.append(start, len);
        im.pos = im.avail;
        any = true;
    }
    if (any || !line.empty()) {
        ++im.line_number;
        return line;
    }
    return std::nullopt;
}

std::size_t GzLineReader::read_raw(char* buf, std::size_t n) {
    // Drain any buffered bytes first so mixing with next_line stays sane.
    Impl& im = *impl_;
    if (im.pos < im.avail) {
        std::size_t take = std::min(n, im.avail - im.pos);
        std::memcpy(buf, im.buf.data() + im.pos, take);
        im.pos += take;
        return take;
    }
    int got = gzread(im.file, buf, static_cast<unsigned>(n));
    if (got < 0) throw_gz_error(im.file, im.path, "reading");
    return static_cast<std::size_t>(got);
}

const std::filesystem::path& GzLineReader::path() const { return impl_->path; }
std::size_t GzLineReader::line_number() const { return impl_->line_number; }

struct GzLineWriter::Impl {
    gzFile gz = nullptr;
    std::FILE* plain = nullptr;
    std::filesystem::path path;
};

GzLineWriter::GzLineWriter(const std::filesystem::path& path) : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    if (path.extension() == ".gz") {
        impl_->gz = gzopen(path.c_str(), "wb");
        if (!impl_->gz)
            throw DataError("cannot create " + path.string() + ": " + std::strerror(errno));
        gzbuffer(impl_->gz, kBufSize);
    } else {
        impl_->plain = std::fopen(path.c_str(), "wb");
        if (!impl_->plain)
            throw DataError("cannot create " + path.string() + ": " + std::strerror(errno));
    }
}

GzLineWriter::~GzLineWriter() {
    if (impl_) close();
}

GzLineWriter::GzLineWriter(GzLineWriter&&) noexcept = default;
GzLineWriter& GzLineWriter::operator=(GzLineWriter&&) noexcept = default;

void GzLineWriter::write_line(std::string_view line) {
    if (impl_->gz) {
        if (gzwrite(impl_->gz, line.data(), static_cast<unsigned>(line.size())) !=
                static_cast<int>(line.size()) ||
            gzputc(impl_->gz, '\n') < 0)
            throw_gz_error(impl_->gz, impl_->path, "writing");
    } else if (impl_->plain) {
        if (std::fwrite(line.data(), 1, line.size(), impl_->plain) != line.size() ||
            std::fputc('\n', impl_->plain) == EOF)
            throw DataError("writing " + impl_->path.string() + ": " + std::strerror(errno));
    }
}

void GzLineWriter::close() {
    if (impl_->gz) {
        if (gzclose(impl_->gz) != Z_OK)
            throw DataError("closing " + impl_->path.string());
        impl_->gz = nullptr;
    }
    if (impl_->plain) {
        if (std::fclose(impl_->plain) != 0)
            throw DataError("closing " + impl_->path.string());
        impl_->plain = nullptr;
    }
}

std::string md5_file(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw DataError("cannot open " + path.string() + ": " + std::strerror(errno));

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_md5(), nullptr);
    std::vector<char> buf(kBufSize);
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), f)) > 0)
        EVP_DigestUpdate(ctx, buf.data(), n);
    bool err = std::ferror(f);
    std::fclose(f);
    if (err) {
        EVP_MD_CTX_free(ctx);
        throw DataError("reading " + path.string());
    }

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

}  // namespace streamgen
