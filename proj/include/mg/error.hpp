#pragma once

#include <stdexcept>
#include <string>

namespace mg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(what + " at " + std::to_string(line) + ":" + std::to_string(column)),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// A well-formed request that the domain cannot satisfy (no parse,
/// inconsistent network, unsatisfied grammar). The CLI maps it to exit code 1.
class DomainError : public Error {
public:
    using Error::Error;
};

}  // namespace mg
