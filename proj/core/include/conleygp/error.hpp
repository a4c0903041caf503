#pragma once

#include <stdexcept>
#include <string>

namespace conleygp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed, out-of-domain or otherwise invalid input data.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameters handed to an operation (bad bounds, bad budget, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Numerical breakdown: failed factorization, degenerate likelihood.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Violated internal invariant; indicates a bug upstream rather than bad input.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace conleygp
