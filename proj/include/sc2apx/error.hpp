#pragma once

#include <stdexcept>
#include <string>

namespace sc2apx {

// Base for every error the library reports. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input document (bad JSON, bad TSV, wrong value types).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnknownUnitError : public ValidationError {
 public:
  explicit UnknownUnitError(const std::string& name)
      : ValidationError("unknown unit '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

// Both armies still alive when the round cap is reached.
class StalemateError : public Error {
 public:
  explicit StalemateError(int rounds)
      : Error("stalemate: both armies alive after " + std::to_string(rounds) +
              " rounds"),
        rounds_(rounds) {}
  int rounds() const { return rounds_; }

 private:
  int rounds_;
};

// Exact enumeration refused because the state space exceeds its limits.
class ExplosionError : public Error {
 public:
  using Error::Error;
};

class IncompleteReferenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace sc2apx
