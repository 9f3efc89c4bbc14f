#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nlrod {

// Base of everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// Evaluation outside the admissible region of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

class SingularCurvature : public DomainError {
public:
    using DomainError::DomainError;
};

class InadmissibleSlope : public DomainError {
public:
    using DomainError::DomainError;
};

// Point where a closed form loses meaning (fold, vanishing denominator).
class DegeneratePoint : public DomainError {
public:
    using DomainError::DomainError;
};

// Thrown during integration; carries the arclength where it happened.
class IntegrationError : public DomainError {
public:
    IntegrationError(const std::string& what, double t) : DomainError(what), t(t) {}
    double t;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class RootNotFound : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class NoFold : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class NotFound : public ConvergenceError {
public:
    using ConvergenceError::ConvergenceError;
};

class NoConvergence : public ConvergenceError {
public:
    NoConvergence(const std::string& what, std::vector<double> last)
        : ConvergenceError(what), last_iterate(std::move(last)) {}
    std::vector<double> last_iterate;
};

}  // namespace nlrod
