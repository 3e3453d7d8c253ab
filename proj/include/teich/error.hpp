#pragma once

#include <stdexcept>
#include <string>

namespace teich {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (sizes, ranges, parameters).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Too few samples to resolve the requested Fourier band without aliasing.
class AliasingError : public Error {
public:
    using Error::Error;
};

/// A circle-map lift is not strictly increasing.
class MonotonicityError : public Error {
public:
    using Error::Error;
};

/// Numerical inversion of a lift failed to bracket a preimage.
class InversionError : public Error {
public:
    using Error::Error;
};

/// Coincident or wrongly ordered points in a three-point fit.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be inverted is singular or exceeds the condition cap.
class IllConditionedError : public Error {
public:
    using Error::Error;
};

/// A point lies outside the open unit disc.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be symmetric is not, beyond tolerance.
class SymmetryError : public Error {
public:
    using Error::Error;
};

/// Two fields or vectors live on incompatible grids.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// ∂z f vanishes somewhere on a grid, so the Beltrami quotient is undefined.
class VanishingDerivativeError : public Error {
public:
    VanishingDerivativeError(const std::string& what, std::size_t radial, std::size_t angular)
        : Error(what), radial_index(radial), angular_index(angular) {}
    std::size_t radial_index;
    std::size_t angular_index;
};

/// Malformed map specification or experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace teich
