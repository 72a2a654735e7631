#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace commimmune {

/// Base class for errors raised on bad input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t line)
        : DataError(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A budget (walk restarts, generation attempts) ran out or the
/// requested parameters cannot be realized.
class FeasibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace commimmune
