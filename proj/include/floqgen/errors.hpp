#pragma once

#include <stdexcept>
#include <string>

namespace floqgen {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// Liouvillian kernel is (numerically) more than one-dimensional.
class DegenerateKernel : public Error {
public:
    explicit DegenerateKernel(const std::string& what) : Error(what) {}
};

// Kernel vector has (numerically) zero trace.
class NonNormalizable : public Error {
public:
    explicit NonNormalizable(const std::string& what) : Error(what) {}
};

// Integrator step cannot resolve the fast period.
class StepTooLarge : public Error {
public:
    explicit StepTooLarge(const std::string& what) : Error(what) {}
};

// A propagated state broke a density-matrix invariant beyond tolerance.
class StateInvariantViolation : public Error {
public:
    explicit StateInvariantViolation(const std::string& what) : Error(what) {}
};

// Doubling the extended-space truncation changed observables too much.
class TruncationNotConverged : public Error {
public:
    explicit TruncationNotConverged(const std::string& what) : Error(what) {}
};

// Fock-space truncation carries non-negligible population at the top levels.
class TruncationTooSmall : public Error {
public:
    explicit TruncationTooSmall(const std::string& what) : Error(what) {}
};

// Generator does not match the restricted single-jump Lindblad shape.
class ShapeMismatch : public Error {
public:
    explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

// Experiment configuration failed schema validation.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Non-finite values or a failed factorization.
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

} // namespace floqgen
