#pragma once

#include <stdexcept>
#include <string>

namespace qbell {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the quantity is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical maximizer failed to meet its stopping criterion.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_value)
        : Error(what + " (best value found: " + std::to_string(best_value) + ")"),
          best_value_(best_value) {}

    [[nodiscard]] double best_value() const noexcept { return best_value_; }

private:
    double best_value_;
};

/// A photon-number truncation is too small for the requested accuracy.
class TruncationError : public Error {
public:
    using Error::Error;
};

}  // namespace qbell
