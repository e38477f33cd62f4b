#pragma once

#include <stdexcept>
#include <string>

namespace flcontract {

/// Argument outside the mathematical domain of a formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Total iteration time reaches or exceeds the publisher's deadline.
class InfeasibleTimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Types not strictly ascending in theta.
class OrderingError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Even the cheapest admissible menu exceeds the reward budget.
class BudgetInfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Menu and type list (or other index-aligned inputs) differ in length.
class AlignmentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Configuration document is malformed or violates an invariant.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace flcontract
