#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qpole {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (e.g. inverting zero).
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Elimination found no usable pivot; carries the rank reached so far.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(const std::string& what, std::size_t estimated_rank)
        : Error(what), estimated_rank_(estimated_rank) {}

    std::size_t estimated_rank() const noexcept { return estimated_rank_; }

private:
    std::size_t estimated_rank_;
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::size_t iterations)
        : Error(what), iterations_(iterations) {}

    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

/// Eigenvalues of a complex adjoint that could not be grouped into conjugate pairs.
class PairingError : public Error {
public:
    using Error::Error;
};

class DegreeError : public Error {
public:
    using Error::Error;
};

/// A requested root repeats a similarity class already covered by the polynomial.
class DuplicateClassError : public Error {
public:
    using Error::Error;
};

class UncontrollableError : public Error {
public:
    using Error::Error;
};

/// Request outside the range where a design method is valid.
class ScopeError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t step)
        : Error(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace qpole
