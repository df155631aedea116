#pragma once

#include <stdexcept>

namespace homsim {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A physical or numerical parameter is outside its admissible domain.
class ParameterDomainError : public Error {
public:
    using Error::Error;
};

/// The requested closed-form evaluation sits on a removable singularity;
/// the message points the caller at the dedicated limit routine.
class SingularConfigError : public Error {
public:
    using Error::Error;
};

/// An operation that requires the analytic sinc family was handed a
/// different kind of spectrum.
class UnsupportedSpectrumError : public Error {
public:
    using Error::Error;
};

/// Numerical quadrature failed to converge; the message carries the
/// window, node count and last refinement delta.
class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Malformed input text (CSV grids, config files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Command-line misuse; the CLI maps this to exit status 2.
class UsageError : public Error {
public:
    using Error::Error;
};

} // namespace homsim
