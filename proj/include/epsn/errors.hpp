#pragma once

#include <stdexcept>
#include <string>

namespace epsn {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A map was applied exactly at a point of the singular set S.
class SingularPointError : public Error {
 public:
  using Error::Error;
};

// A symbolic point ran out of known symbols.
class HorizonExhaustedError : public Error {
 public:
  using Error::Error;
};

// Requested preimages of a point outside the image of f.
class NotInImageError : public Error {
 public:
  using Error::Error;
};

// Candidate purging removed every point.
class EmptyCandidateSetError : public Error {
 public:
  using Error::Error;
};

// An orbit entered S before reaching the requested length.
class SingularOrbitError : public Error {
 public:
  using Error::Error;
};

// Two separated sets do not share (eps, n) or system.
class MismatchedParametersError : public Error {
 public:
  using Error::Error;
};

class OverlappingPartsError : public Error {
 public:
  using Error::Error;
};

class NotPrimitiveError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
};

// Exact optimal status required but unavailable.
class NotOptimalError : public Error {
 public:
  using Error::Error;
};

class MonotonicityViolationError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class InadmissibleWordError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSystemError : public Error {
 public:
  using Error::Error;
};

class SingularAtomError : public Error {
 public:
  using Error::Error;
};

// Config parsing/validation failure; message carries the field path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace epsn
