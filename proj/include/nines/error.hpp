#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nines {

// Base for every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Division by zero, zero denominators, and similar arithmetic faults.
class ArithmeticError : public Error {
public:
  using Error::Error;
};

// A precondition on an argument was violated (out-of-range weight, bad
// dimensions, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// Malformed text input. `position` is the 0-based offset of the offending
// character.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::string input, std::size_t position)
      : Error(format(what, input, position)), input_(std::move(input)), position_(position) {}

  const std::string& input() const noexcept { return input_; }
  std::size_t position() const noexcept { return position_; }

private:
  static std::string format(const std::string& what, const std::string& input, std::size_t pos) {
    std::string msg = "parse error at position " + std::to_string(pos) + ": " + what + "\n  " + input + "\n  ";
    msg.append(pos, ' ');
    msg += '^';
    return msg;
  }

  std::string input_;
  std::size_t position_;
};

// An internal consistency check failed (a relation that does not hold
// numerically, a certificate that does not verify). Signals a bug rather than
// bad user input.
class VerificationError : public Error {
public:
  using Error::Error;
};

}  // namespace nines
