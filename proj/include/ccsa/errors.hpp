#pragma once

#include <stdexcept>
#include <string>

namespace ccsa {

/// Malformed input to an operation (bad argument values, missing vertices, ...).
class invalid_argument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Text input that cannot be parsed; carries the 1-based line number.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// A configured resource budget (variable count, instance size, ...) was exceeded.
class resource_limit_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The LP solver gave up (iteration limit, numerical breakdown); distinct from
/// a proven INFEASIBLE/UNBOUNDED status.
class solver_failure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A probability or distribution came out inconsistent beyond tolerance.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ccsa
