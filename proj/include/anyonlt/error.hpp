#pragma once

#include <stdexcept>
#include <string>

namespace anyonlt {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Iterative or direct solver failed; carries the best residual reached.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

/// Root bracketing, quadrature or series evaluation did not converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// No positive eigenvalue inside the searched spectral window.
class WindowExhausted : public Error {
 public:
  using Error::Error;
};

/// A requested allocation would exceed the configured memory budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class UnreachableMass : public Error {
 public:
  using Error::Error;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class LedgerIncomplete : public Error {
 public:
  explicit LedgerIncomplete(const std::string& entry)
      : Error("ledger entry missing: " + entry), entry_(entry) {}
  const std::string& entry() const noexcept { return entry_; }

 private:
  std::string entry_;
};

}  // namespace anyonlt
