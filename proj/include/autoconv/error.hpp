#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace autoconv {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  BadRank,
  ShapeMismatch,
  NotInPolytope,
  TooLarge,
  Singleton,
  EmptyIntersection,
  LengthMismatch,
  Unsorted,
  NotMajorized,
  IndexOutOfRange,
  DegeneratePinch,
  NotInQk,
  NotInK,
  MissingWitness,
  TooManyAtoms,
  TooFewPoints,
  Infeasible,
  BadInput,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for every library failure; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace autoconv
