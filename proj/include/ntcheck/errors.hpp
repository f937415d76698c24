#pragma once

#include <stdexcept>
#include <string>

namespace ntcheck {

// Violated argument constraint (even modulus for a Jacobi symbol, j < 4, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NotInvertibleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Modulus outside the supported class (e.g. 2 || c for Gauss sums).
class UnsupportedModulusError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Point outside the convergence domain of a series.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation too close to a pole of a closed form.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Oscillatory parameters inside the guard band between the two regimes.
class GuardBandError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ntcheck
