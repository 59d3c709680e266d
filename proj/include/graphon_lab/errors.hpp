#pragma once

#include <stdexcept>
#include <string>

namespace graphon_lab {

// Base class for every error raised by the library. The CLI maps these to
// exit status 2 (usage / precondition) or renders them with module context.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A coordinate, window, or step left the unit square / interval.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid parameter at construction time (p outside [0,1], r <= 0, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A request would exceed a configured resource cap (vertex count, memory).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// The operation has no implementation for this graphon family.
class UnsupportedSpecError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed text input (spec strings, graph files, config files).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace graphon_lab
