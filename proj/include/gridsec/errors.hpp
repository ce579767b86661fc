#pragma once

#include <stdexcept>
#include <string>

namespace gridsec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input exceeds (or falls short of) a length bound.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A parameter set violates its documented invariants.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// Structurally malformed input (bad framing, duplicate points, ...).
class MalformedInput : public Error {
 public:
  using Error::Error;
};

}  // namespace gridsec
