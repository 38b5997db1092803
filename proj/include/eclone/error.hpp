#pragma once

#include <stdexcept>
#include <string>

namespace eclone {

// Base class for every error raised by the library. The C API maps each
// subclass onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied argument violates a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A numeric parameter is outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operand shapes or qubit counts do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Unknown, duplicated or missing qubit label.
class LabelError : public Error {
 public:
  using Error::Error;
};

// Optical mode or arm not present in a mode registry.
class RegistryError : public Error {
 public:
  using Error::Error;
};

// Input data carry no information (e.g. all tomography counts are zero).
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

// Malformed CSV/JSON input.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Filesystem failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace eclone
