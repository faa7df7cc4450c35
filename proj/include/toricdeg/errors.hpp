#pragma once

#include <stdexcept>
#include <string>

namespace toricdeg {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneratePolytope : public Error {
 public:
  using Error::Error;
};

class NonRationalInput : public Error {
 public:
  using Error::Error;
};

class DegenerateSimplex : public Error {
 public:
  using Error::Error;
};

class NotReflexive : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, long line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  long line() const noexcept { return line_; }

 private:
  long line_;
};

class EmptyDegree : public Error {
 public:
  using Error::Error;
};

class DegreeOutOfRange : public Error {
 public:
  using Error::Error;
};

class InsufficientDegrees : public Error {
 public:
  using Error::Error;
};

class TruncationTooCoarse : public Error {
 public:
  TruncationTooCoarse(const std::string& what, int required_m_max)
      : Error(what), required_m_max_(required_m_max) {}
  int required_m_max() const noexcept { return required_m_max_; }

 private:
  int required_m_max_;
};

class Inconclusive : public Error {
 public:
  using Error::Error;
};

}  // namespace toricdeg
