#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ordpat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad length, delay, level...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Two values of a window compare equal, so no order pattern is defined.
class TieError : public Error {
 public:
  using Error::Error;
};

class SeriesTooShort : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class AllWindowsTied : public Error {
 public:
  using Error::Error;
};

/// An operation defined for one pattern length received another.
class WrongLength : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A distribution violates normalization or the local extremum balance.
class ConstraintViolation : public Error {
 public:
  using Error::Error;
};

class DegenerateAtWhiteNoise : public Error {
 public:
  using Error::Error;
};

class ZeroDenominator : public Error {
 public:
  using Error::Error;
};

class NonStationaryInput : public Error {
 public:
  using Error::Error;
};

/// Exact enumeration requested beyond the supported size.
class SizeLimit : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  /// 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class UnknownTable : public Error {
 public:
  using Error::Error;
};

}  // namespace ordpat
