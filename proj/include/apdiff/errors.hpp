#pragma once

#include <stdexcept>
#include <string>

namespace apdiff {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands from different spaces or with incompatible shapes.
class StructuralError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedInputError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent configuration documents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A computed quantity violated an invariant it must satisfy (e.g. dual
// pairing residual).
class NumericalInvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace apdiff
