#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distbeam {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or violated type invariant.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature exceeded its subdivision cap or met a non-finite sample.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// det H is below the singular threshold: the interface system has no unique
/// solution (P on the exceptional sequence, or (P1,P2) on the zero manifolds).
class SingularParameterError : public Error {
public:
    SingularParameterError(const std::string& msg, double det, double scale)
        : Error(msg), det(det), scale(scale) {}
    double det;
    double scale;
};

/// Grid too coarse for the requested coefficient transition width.
class ResolutionError : public Error {
public:
    using Error::Error;
};

/// A linear system came out numerically singular.
class SolverError : public Error {
public:
    SolverError(const std::string& msg, double pivot) : Error(msg), pivot(pivot) {}
    explicit SolverError(const std::string& msg) : Error(msg), pivot(0.0) {}
    double pivot;
};

/// Operation precondition violated (e.g. overlapping supports).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Neither the convergence nor the divergence pattern fits the data.
class InconclusiveError : public Error {
public:
    using Error::Error;
};

/// Syntax error with the offset of the offending character.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t position)
        : Error(msg + " (at position " + std::to_string(position) + ")"),
          position(position) {}
    std::size_t position;
};

} // namespace distbeam
