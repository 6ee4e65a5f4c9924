#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace curvpdc {

using Complex = std::complex<double>;

enum class Mode { signal, idler };

inline const char* to_string(Mode mode) { return mode == Mode::signal ? "signal" : "idler"; }

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input outside an operation's domain: bad parameters, cutoff violations, zero-norm states.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The Fock-space truncation could not meet the requested tolerance.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// A deformed generator could not be built (negative radicand).
class AlgebraError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvpdc
