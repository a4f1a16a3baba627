#pragma once

#include <stdexcept>
#include <string>

namespace blackwell {

enum class ErrorKind {
  UndefinedInput,     // operation not defined for this input (zero polynomial, monomial, ...)
  InvalidIsolation,   // interval does not isolate exactly one root
  PoleOrder,          // Laurent expansion with pole of order >= 2
  Stochasticity,      // transition row does not sum to the common denominator
  Model,              // malformed game
  Profile,            // invalid action index in a profile
  Applicability,      // method does not cover this game class
  Scale,              // enumeration cap exceeded
  Parse,              // input file syntax / schema
  Io,
  Usage,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace blackwell
