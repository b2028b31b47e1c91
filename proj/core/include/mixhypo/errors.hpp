#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixhypo {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or an arithmetically broken construction
// (weight sum off, mismatched supports, CDF outside [0,1] beyond round-off).
class ConstructionError : public Error {
public:
    using Error::Error;
};

// Evaluation outside the mathematically valid region
// (quantile argument outside (0,1), MGF argument outside its domain,
// hazard where the reliability has underflowed).
class DomainError : public Error {
public:
    using Error::Error;
};

// Parameters too close together: the signed-mixture weights would
// overflow and the density would be numerical noise.
class SeparationError : public Error {
public:
    using Error::Error;
};

// A parameter that must be strictly positive is not.
class PositivityError : public Error {
public:
    using Error::Error;
};

// Requested raw moment does not exist for a component.
class MomentDoesNotExist : public Error {
public:
    MomentDoesNotExist(const std::string& msg, int component, int max_order)
        : Error(msg), component_(component), max_order_(max_order) {}

    // Index of the offending component; -1 for a standalone distribution.
    int component() const noexcept { return component_; }
    // Largest order with a finite moment.
    int max_order() const noexcept { return max_order_; }

private:
    int component_;
    int max_order_;
};

// Adaptive quadrature could not reach the requested tolerance.
// Carries the best estimate obtained and its error estimate.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& msg, double best_estimate, double error_estimate)
        : Error(msg), best_(best_estimate), err_(error_estimate) {}

    double best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return err_; }

private:
    double best_;
    double err_;
};

// Too few data points for the requested number of parameters.
class InsufficientData : public Error {
public:
    using Error::Error;
};

}  // namespace mixhypo
