#pragma once

#include <stdexcept>
#include <string>

namespace certikraw {

// Base of every error raised by the library. Mathematical failures inside the
// verification pipeline are caught and turned into a failed certificate; only
// input problems (I/O, parse, validation) escape to the caller.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An interval endpoint became NaN or infinite (overflow, or a non-finite input).
class NonFiniteInterval : public Error {
 public:
  using Error::Error;
};

class DivisionByZeroInterval : public Error {
 public:
  DivisionByZeroInterval() : Error("division by an interval containing zero") {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class SingularApprox : public Error {
 public:
  SingularApprox() : Error("no candidate R: matrix is numerically singular") {}
};

class RankSelectionFailed : public Error {
 public:
  using Error::Error;
};

class OriginArg : public Error {
 public:
  OriginArg() : Error("atan2 is undefined at the origin") {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class NewtonSingular : public Error {
 public:
  NewtonSingular() : Error("Newton step failed: Jacobian is singular") {}
};

class NewtonDiverged : public Error {
 public:
  NewtonDiverged() : Error("Newton iteration diverged") {}
};

}  // namespace certikraw
