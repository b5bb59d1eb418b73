#pragma once

#include <stdexcept>
#include <string>

namespace polyspec {

// Base for every recoverable domain failure. The CLI maps these to exit status 1.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InteriorEdge : public DomainError {
public:
    using DomainError::DomainError;
};

class OutOfDomain : public DomainError {
public:
    using DomainError::DomainError;
};

class DegenerateElement : public DomainError {
public:
    using DomainError::DomainError;
};

class DimensionTooLarge : public DomainError {
public:
    using DomainError::DomainError;
};

class NoConvergence : public DomainError {
public:
    NoConvergence(const std::string& what, int iterations, double worst_residual)
        : DomainError(what), iterations_(iterations), worst_residual_(worst_residual) {}

    int iterations() const noexcept { return iterations_; }
    double worst_residual() const noexcept { return worst_residual_; }

private:
    int iterations_;
    double worst_residual_;
};

class InadmissibleOrbit : public DomainError {
public:
    using DomainError::DomainError;
};

class NotOctahedron : public DomainError {
public:
    using DomainError::DomainError;
};

class NotOneDimensionalType : public DomainError {
public:
    using DomainError::DomainError;
};

class InsufficientSpectrum : public DomainError {
public:
    using DomainError::DomainError;
};

} // namespace polyspec
