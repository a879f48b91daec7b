#pragma once

#include <stdexcept>
#include <string>

namespace zslice {

// Caller supplied something outside an operation's contract. The CLI maps
// these to exit code 2.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation could not be carried out reliably (conditioning, singular
// blocks). The CLI maps these to exit code 1.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class PreconditionError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class DimensionMismatch : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class WrongRegionError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

// lambda = 0 on the P1/P2 boundary hyperboloid.
class DegenerateModeError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class PoleError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class RegulatorError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class SizeCapError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

class ConditioningError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace zslice
