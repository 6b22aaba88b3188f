#pragma once

#include <stdexcept>

namespace spectre {

/// Input outside the admissible range of an operation (bad parameter,
/// point outside a domain, malformed configuration).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// |1 - conj(lambda) z| fell below the pole tolerance.
class PoleProximityError : public DomainError {
public:
    using DomainError::DomainError;
};

/// The two preimages of a point coincide; the point is outside the covering domain.
class DegenerateRootsError : public DomainError {
public:
    using DomainError::DomainError;
};

class NoSuchEigenvalueError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A sampled or iterative procedure exhausted its budget.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact integer arithmetic would overflow 64 bits.
class IndexOverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

/// A matrix does not have the block-triangular shape an operation relies on.
class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The map reverses orientation on the circle; only the orientation-preserving case is supported.
class OrientationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spectre
