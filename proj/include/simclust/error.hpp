#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace simclust {

//! Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! Malformed or invalid user input (bad WKT, non-simple rings, empty files).
class InputError : public Error
{
public:
  using Error::Error;
};

//! A geometry violates a polygon invariant (too few vertices, zero area,
//! self-intersection, non-finite coordinate).
class InvalidGeometry : public InputError
{
public:
  using InputError::InputError;
};

//! Numerical degeneracy detected inside a geometric kernel.
class DegenerateGeometry : public Error
{
public:
  using Error::Error;
};

//! Refusal to run an exhaustive computation above the desk-scale guard.
class ScaleGuardError : public Error
{
public:
  using Error::Error;
};

//! Classifier training could not proceed (e.g. only one class present).
class TrainingError : public Error
{
public:
  using Error::Error;
};

//! Internal consistency check failed; indicates a bug, not bad input.
class InvariantViolation : public Error
{
public:
  using Error::Error;
};

} // namespace simclust
