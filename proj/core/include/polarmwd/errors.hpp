#pragma once

#include <stdexcept>
#include <string>

namespace polarmwd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The closed-form minimum weight distribution only holds for information sets
// that are downward-closed under the monomial partial order.
class NonDecreasingSet : public Error {
 public:
  NonDecreasingSet() : Error("information set is not decreasing under the monomial partial order") {}
  explicit NonDecreasingSet(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace polarmwd
