#pragma once

#include <stdexcept>
#include <string>

namespace magstab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument ranges (non-positive stretch, FD step out of range, ...).
struct DomainError : Error {
  using Error::Error;
};

// Roots of the characteristic equation coincide and cannot be split into
// independent modes. Callers perturb lambda and retry.
struct RootCoincidence : Error {
  double lambda;
  RootCoincidence(const std::string& what, double lam) : Error(what), lambda(lam) {}
};

struct AdmissibilityViolated : Error {
  using Error::Error;
};

struct DegenerateMode : Error {
  using Error::Error;
};

struct NumericalInconsistency : Error {
  using Error::Error;
};

}  // namespace magstab
