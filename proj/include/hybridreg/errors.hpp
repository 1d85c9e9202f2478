#pragma once

#include <stdexcept>
#include <string>

namespace hybridreg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operation received an empty cloud / list where at least one element is required.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Malformed point-cloud or configuration file. The message names the line or byte offset.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Rank-deficient geometry (collinear points, zero total weight).
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// No transform hypothesis could be produced from the correspondences.
class RegistrationFailure : public Error {
 public:
  using Error::Error;
};

// Scene recipe cannot satisfy the requested overlap.
class GenerationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace hybridreg
