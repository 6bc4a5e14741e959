#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace obsgap {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter violates its type invariant or an operation precondition.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Sampled data does not decay at the edge of its truncated support.
class TruncationError : public Error {
public:
    using Error::Error;
};

/// A grid is too coarse for the oscillation it has to carry.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// Argument outside the region where an object is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iteration or series stopped before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_increment,
                     std::vector<std::complex<double>> iterates = {})
        : Error(what), last_increment_(last_increment), iterates_(std::move(iterates)) {}

    double last_increment() const noexcept { return last_increment_; }
    const std::vector<std::complex<double>>& iterates() const noexcept { return iterates_; }

private:
    double last_increment_;
    std::vector<std::complex<double>> iterates_;
};

}  // namespace obsgap
