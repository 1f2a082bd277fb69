#pragma once

#include <stdexcept>
#include <string>

namespace ffc {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad codec characters, wrong tuple sizes, broken JSON.
class InputError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that fails a mathematical requirement (not a basis,
// elliptic where hyperbolic is required, ...).
class MathError : public Error {
 public:
  using Error::Error;
};

// A tuple that was expected to generate a free factor does not.
class NotFreeFactorError : public MathError {
 public:
  using MathError::MathError;
};

// A triangulation that is not a simplicial disc.
class MalformedDiscError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace ffc
