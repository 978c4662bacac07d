#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace totient {

// Precondition violated by an argument value (zero modulus, odd phi, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Regression could not produce a model (empty input, degenerate variance).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed dataset or model file. `line()` is 0 when not line-oriented.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A claimed phi(n) that does not correspond to any factorization of n.
class InconsistentPhiError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace totient
