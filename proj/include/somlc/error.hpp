#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace somlc {

/// Base class of all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration, dataset or file contents.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A category, element or individual name that cannot be resolved.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Operation undefined in the current model state (empty category,
/// zero-probability condition, incompatible connective family).
class EvalError : public Error {
public:
    using Error::Error;
};

/// Positioned syntax or validation error from a parser or file reader.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    static ParseError at_byte(const std::string& message, std::size_t byte_offset) {
        ParseError e("byte " + std::to_string(byte_offset) + ": " + message);
        e.byte_ = byte_offset;
        return e;
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    std::size_t byte_offset() const { return byte_; }

private:
    explicit ParseError(const std::string& message) : Error(message) {}

    std::size_t line_ = 0;
    std::size_t column_ = 0;
    std::size_t byte_ = 0;
};

}  // namespace somlc
