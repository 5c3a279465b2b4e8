#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qknots {

/// Malformed or inconsistent user input (files, command-line values).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input text rejected by one of the parsers; carries the offending position.
class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column, std::string token)
        : InputError(format(what, line, column, token)),
          line_(line),
          column_(column),
          token_(std::move(token)) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& token() const noexcept { return token_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column,
                              const std::string& token) {
        std::string msg = "line " + std::to_string(line) + ", column " + std::to_string(column);
        if (!token.empty()) msg += ", token '" + token + "'";
        return msg + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
    std::string token_;
};

/// A configured size limit (crossings, qubits, nodes, contraction cost) was exceeded.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its domain (unknown id, wrong arity, invalid site).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace qknots
