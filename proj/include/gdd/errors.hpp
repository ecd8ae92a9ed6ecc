#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gdd {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidAssignment : public Error {
public:
  using Error::Error;
};

class InvalidModel : public Error {
public:
  using Error::Error;
};

class InvalidSpec : public Error {
public:
  using Error::Error;
};

class InvalidDiagram : public Error {
public:
  using Error::Error;
};

// A size cap (state space, cluster order, oracle variables) was exceeded.
class CapacityError : public Error {
public:
  using Error::Error;
};

// A transform that would loosen the polytope was refused.
class RefusedTransform : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& what)
  : Error("line " + std::to_string(line) + ": " + what)
  , line_(line)
  { }

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

}
