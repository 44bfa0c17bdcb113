#pragma once

#include <stdexcept>
#include <string>

namespace prnuforge {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file, truncated stream, missing directory.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Recognizable file but unsupported layout (bit depth, color type, magic).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Manifest or report content violates a documented rule.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Scalar argument outside its documented range.
class ParamError : public Error {
 public:
  using Error::Error;
};

/// Operands with incompatible dimensions.
class ShapeError : public Error {
 public:
  using Error::Error;
};

}  // namespace prnuforge
