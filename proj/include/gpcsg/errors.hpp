#pragma once

#include <stdexcept>
#include <string>

namespace gpcsg {

/// Base class of every error thrown by the solver core.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or configuration value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Index or random-variable value outside its valid range.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A physical or gPC state left the admissible set and could not be recovered.
class InadmissibleState : public Error {
 public:
  InadmissibleState(const std::string& what, double xi)
      : Error(what), xi_(xi) {}
  /// Random-variable value at which admissibility failed (NaN if unknown).
  double xi() const noexcept { return xi_; }

 private:
  double xi_;
};

/// Symmetric factorization of the Galerkin mass-type matrix failed.
class HyperbolicityLoss : public Error {
 public:
  using Error::Error;
};

/// Riemann data generating vacuum.
class VacuumError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gpcsg
