#pragma once

#include <stdexcept>
#include <string>

namespace frechet {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands belong to different group/semigroup instances.
class InstanceMismatchError : public Error {
public:
    using Error::Error;
};

/// Division by k! requested beyond the instance's divisibility bound.
class UnsupportedDivisionError : public Error {
public:
    using Error::Error;
};

/// A table-backed function has no sample at a required point.
class MissingSampleError : public Error {
public:
    using Error::Error;
};

/// Malformed monomial/tensor/grid specification or malformed input document.
class InvalidSpecError : public Error {
public:
    using Error::Error;
};

/// Structurally valid input with out-of-range or inconsistent parameters.
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// Evaluation requested outside the function's domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Input failed the polynomial precondition or an a-posteriori decomposition check.
class DecompositionError : public Error {
public:
    using Error::Error;
};

/// The requested check does not apply to the given candidate.
class NotApplicableError : public Error {
public:
    using Error::Error;
};

} // namespace frechet
