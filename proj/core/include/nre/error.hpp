#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nre {

/// Base class for every error raised by the simulator library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that makes an operation mathematically undefined (zero-norm vectors,
/// empty softmax input, too few samples).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Malformed text input; carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Structurally valid input that violates a format-level invariant
/// (dimension mismatch, duplicate token, unsupported version).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Configuration value that violates a documented constraint.
class ValidationError : public Error {
public:
    ValidationError(const std::string& key, const std::string& what)
        : Error(key + ": " + what), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace nre
