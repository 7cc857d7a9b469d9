// SPDX-License-Identifier: Apache-2.0

#ifndef BATCHMP_ERRORS_HPP
#define BATCHMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace batchmp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands disagree on limb count, lane count or batch width.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A value does not fit the declared bit size.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A carry escaped the top limb of a fixed-capacity batch.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Unsupported size, window, flavor or option combination.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Even modulus, or modulus outside (1, 2^t).
class InvalidModulusError : public Error {
 public:
  using Error::Error;
};

/// Malformed hexadecimal text.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace batchmp

#endif  // BATCHMP_ERRORS_HPP
