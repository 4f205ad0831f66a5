#pragma once

#include <stdexcept>
#include <string>

namespace trk {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Incompatible tensor/vector shapes (axis count or axis sizes).
struct ShapeError : Error {
  using Error::Error;
};

// Input outside an operation's domain (bad labels, non-bijective map,
// non-complementary subspaces, unsupported parameters, ...).
struct DomainError : Error {
  using Error::Error;
};

// A documented precondition was violated by the caller.
struct PreconditionError : Error {
  using Error::Error;
};

// Guard against instances too large for an exponential-cost operation.
struct ResourceGuardError : Error {
  using Error::Error;
};

// A runtime assertion tied to a step of the extraction pipeline failed.
// These are bug signals: the checked facts are guaranteed by the math.
struct InternalCheckError : Error {
  std::string step;
  InternalCheckError(std::string step_name, const std::string& msg)
      : Error("internal check '" + step_name + "' failed: " + msg),
        step(std::move(step_name)) {}
};

}  // namespace trk
