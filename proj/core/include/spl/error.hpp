#pragma once

#include <stdexcept>
#include <string>

namespace spl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A file was readable but its contents are not a supported image.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Operand shapes do not agree, or are too small for the operation.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// The operation needs a different channel count.
class ChannelError : public Error {
 public:
  using Error::Error;
};

/// The image carries the wrong value-range tag for the operation.
class RangeTagError : public Error {
 public:
  using Error::Error;
};

/// A NaN or infinity appeared where only finite values are allowed.
class NonFiniteError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration value (weights, epsilon, colour matrix, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Objective name not known to the gradient checker.
class UnknownObjective : public Error {
 public:
  using Error::Error;
};

namespace detail {
[[noreturn]] void throw_shape_mismatch(const char* where, const std::string& lhs,
                                       const std::string& rhs);
}  // namespace detail

}  // namespace spl
