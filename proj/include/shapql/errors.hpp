#ifndef SHAPQL_ERRORS_HPP
#define SHAPQL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shapql {

// Base class for all recoverable errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Syntax or validation failure while reading a textual input.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t line, std::size_t column)
        : Error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + msg),
          line(line),
          column(column) {}
    std::size_t line;
    std::size_t column;
};

// An axiom or concept uses a construct outside the declared dialect.
struct DialectError : Error {
    explicit DialectError(const std::string& msg) : Error(msg) {}
};

// The bounded chase could not decide entailment; callers must not guess.
struct OracleUnknownError : Error {
    explicit OracleUnknownError(const std::string& msg)
        : Error(msg + " (try raising the chase depth limit)") {}
};

// A configured size limit (player count, world count, ...) was exceeded.
struct LimitExceededError : Error {
    explicit LimitExceededError(const std::string& msg) : Error(msg) {}
};

// Minimal-support enumeration was cut off before the frontier emptied.
struct SupportsIncompleteError : Error {
    explicit SupportsIncompleteError(const std::string& msg) : Error(msg) {}
};

// Exact linear solve hit a singular matrix.
struct SingularSystemError : Error {
    explicit SingularSystemError(const std::string& msg) : Error(msg) {}
};

}  // namespace shapql

#endif
