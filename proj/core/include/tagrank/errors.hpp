#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tagrank {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid parameter or option value (bad k, alpha out of range, empty seed, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File system or serialization-format failure (unreadable file, bad magic,
/// version or checksum mismatch).
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data. Carries a 1-based line number when
/// the failure maps to a line of a text input; line() == 0 means "no line".
class DataError : public Error {
public:
    explicit DataError(const std::string& what, std::size_t line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

/// Lookup of an entity that does not exist (unknown user id, unknown tag).
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Non-finite value produced by numeric iteration.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace tagrank
