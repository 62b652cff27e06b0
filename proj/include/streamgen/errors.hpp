#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace streamgen {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad user input: unknown pipeline, weight/arity mismatch, bad flag values.
/// Maps to exit code 2 in the CLI.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Problems with the data itself: I/O failures, decompression errors,
/// records that violate an operator's precondition. Maps to exit code 1.
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid UTF-8 in an input line; carries the byte offset of the first
/// offending byte.
class MalformedInputError : public DataError {
public:
    MalformedInputError(const std::string& what, std::size_t byte_offset)
        : DataError(what), byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

}  // namespace streamgen
