#pragma once

#include <stdexcept>
#include <string>

namespace dkc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// κ² ≤ α_v² − α_s²: the effective angular parameter s is not real and positive.
class SupercriticalCoupling : public Error {
public:
    using Error::Error;
};

/// A transform that requires s ≠ κ (or det M ≠ 0) was asked for a degenerate case.
class SingularTransform : public Error {
public:
    using Error::Error;
};

/// No bound state with |E| < m exists for the requested inputs.
class NoBoundState : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

/// Gauss-Laguerre and adaptive quadrature disagree beyond the accepted margin.
class AccuracyNotReached : public Error {
public:
    using Error::Error;
};

class NonNormalizable : public Error {
public:
    using Error::Error;
};

} // namespace dkc
