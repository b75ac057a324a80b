#pragma once

#include <stdexcept>
#include <string>

namespace grp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

/// Raised when a matrix that should have a real spectrum does not.
class HyperbolicityError : public Error {
public:
    using Error::Error;
};

/// A state left the admissible set (negative density, pressure, depth, NaN...).
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int iterations, double residual)
        : Error(what), iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace grp
