#pragma once

#include <stdexcept>
#include <string>

namespace mvph {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition or validation failure on otherwise well-formed input
// (dimension mismatch, singular resolvent, zero divisor, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed text or JSON.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvph
