#pragma once

#include <stdexcept>
#include <string>

namespace dencomb {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-range or otherwise invalid argument (sigma <= 0, even median window, ...).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Image or matrix dimensions that do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration text.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver non-convergence, singular systems, non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dencomb
