#pragma once

#include <stdexcept>
#include <string>

namespace levyhedge {

/// Invalid inputs: bad parameters, abscissas outside a strip, unknown config keys.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure: poles hit, branch jumps, quadrature breakdown, negative variance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public InputError {
public:
    using InputError::InputError;
};

class StripViolation : public InputError {
public:
    using InputError::InputError;
};

class InvalidAbscissa : public InputError {
public:
    using InputError::InputError;
};

class UnsupportedModel : public InputError {
public:
    using InputError::InputError;
};

/// Model with (numerically) vanishing variance denominator.
class DegenerateModel : public InputError {
public:
    using InputError::InputError;
};

class ValidationError : public InputError {
public:
    using InputError::InputError;
};

class PoleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DiscretizationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Path contains a jump with 1 - lambda * dX~ == 0.
class ForbiddenJump : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace levyhedge
