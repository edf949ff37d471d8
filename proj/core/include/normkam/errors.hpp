#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace normkam {

// Base of every error raised by the library. Domain errors (small divisors,
// obstructions, lost monotonicity) derive from DomainError so that callers
// can separate them from programming/usage errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidEntry : public Error {
public:
    using Error::Error;
};

class InvalidFrequency : public Error {
public:
    using Error::Error;
};

class FrequencyMismatch : public Error {
public:
    using Error::Error;
};

class NotNearIdentity : public Error {
public:
    using Error::Error;
};

class NotInImage : public DomainError {
public:
    using DomainError::DomainError;
};

class SmallDivisor : public DomainError {
public:
    SmallDivisor(std::vector<int> mode, double divisor, double bound);

    const std::vector<int>& mode() const noexcept { return mode_; }
    double divisor() const noexcept { return divisor_; }
    double bound() const noexcept { return bound_; }

private:
    std::vector<int> mode_;
    double divisor_;
    double bound_;
};

class ParityViolation : public DomainError {
public:
    using DomainError::DomainError;
};

class NonPositiveMultiplier : public DomainError {
public:
    using DomainError::DomainError;
};

// A nonzero theta-average survived symmetrization at some order m in [s, 2s-2]:
// the map carries a twist (Birkhoff-type) term and is not formally linearizable.
class ObstructionDetected : public DomainError {
public:
    ObstructionDetected(int order, double value, double radial_value);

    int order() const noexcept { return order_; }
    // theta-mean of the symmetrized angular residual at `order`
    double value() const noexcept { return value_; }
    double radial_value() const noexcept { return radial_value_; }

private:
    int order_;
    double value_;
    double radial_value_;
};

class OrderDoublingFailure : public DomainError {
public:
    using DomainError::DomainError;
};

class ConvergenceFailure : public DomainError {
public:
    using DomainError::DomainError;
};

class StepUnderflow : public DomainError {
public:
    using DomainError::DomainError;
};

class AngleMonotonicityLost : public DomainError {
public:
    using DomainError::DomainError;
};

class FitIllConditioned : public DomainError {
public:
    using DomainError::DomainError;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class InvalidProblem : public Error {
public:
    using Error::Error;
};

}  // namespace normkam
