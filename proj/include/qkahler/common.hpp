#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qk {

using cplx = std::complex<double>;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A phase point violating its domain inequality, or a degenerate kernel.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Iterative solver ran out of budget; carries the last estimate and residual.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double estimate, double residual)
        : Error(msg), last_estimate(estimate), last_residual(residual) {}
    double last_estimate;
    double last_residual;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " at position " + std::to_string(position)), pos(position) {}
    std::size_t pos;
};

} // namespace qk
