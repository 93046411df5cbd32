#pragma once

#include <stdexcept>
#include <string>

namespace resonance {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed potential data or a declared vanishing order that the
/// derivative oracle contradicts.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Two-sided derivative requested at an interface where the one-sided
/// values disagree.
class InterfaceAmbiguityError : public Error {
 public:
  using Error::Error;
};

/// Energy or window not strictly above sup V.
class WindowError : public Error {
 public:
  using Error::Error;
};

class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// Square-root argument would cross the negative real axis.
class BranchError : public Error {
 public:
  using Error::Error;
};

/// Not enough Taylor degree left to finish the WKB recursion.
class DegreeExhaustionError : public Error {
 public:
  using Error::Error;
};

/// V^(k)(0+) * V^(l)(L-) vanishes, or k, l are undefined (V == 0).
class DegenerateOrderError : public Error {
 public:
  using Error::Error;
};

/// Resonance index outside N(h).
class IndexError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, int iterations, double last_residual)
      : Error(what), iterations_(iterations), last_residual_(last_residual) {}

  int iterations() const noexcept { return iterations_; }
  double last_residual() const noexcept { return last_residual_; }

 private:
  int iterations_;
  double last_residual_;
};

class IntegrationBudgetError : public Error {
 public:
  IntegrationBudgetError(const std::string& what, double h, double tol)
      : Error(what), h_(h), tol_(tol) {}

  double h() const noexcept { return h_; }
  double tol() const noexcept { return tol_; }

 private:
  double h_;
  double tol_;
};

/// The argument-principle contour could not be certified zero-free.
class ContourError : public Error {
 public:
  using Error::Error;
};

/// Flow continuation through an interface where the Hamilton field is not
/// Lipschitz.
class UniquenessError : public Error {
 public:
  using Error::Error;
};

/// A classical trajectory meets a turning point before reaching its target.
class TurningPointError : public Error {
 public:
  using Error::Error;
};

/// Computed and predicted resonance lists cannot be paired.
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace resonance
