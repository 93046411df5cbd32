#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "resonance/potential.hpp"

namespace resonance {

using cplx = std::complex<double>;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (7, 15) quadrature on [a, b].
QuadratureResult<double> gauss_kronrod(const std::function<double(double)>& f, double a,
                                       double b, double abs_tol, int max_intervals = 4000);
QuadratureResult<cplx> gauss_kronrod(const std::function<cplx(double)>& f, double a, double b,
                                     double abs_tol, int max_intervals = 4000);

/// S(E) = int_0^L sqrt(E - V). Throws WindowError unless E > sup V.
double action(const Potential& v, double energy);

/// T(E) = int_0^L 1 / (2 sqrt(E - V)) = dS/dE.
double period(const Potential& v, double energy);

/// Affine travel time int_{x0}^{x1} ds / (2 sqrt(E - V(s))) for x0 <= x1.
/// Throws TurningPointError if E <= V somewhere on [x0, x1].
double travel_time(const Potential& v, double energy, double x0, double x1);

/// phi(x; z) = int_0^x sqrt(z - V), principal branch. Requires Re z > sup V
/// (BranchError otherwise); with Im z = 0 and x = L this is action(V, z).
cplx complex_phase(const Potential& v, double x, cplx z);

/// d/dz phi(x; z) = int_0^x 1 / (2 sqrt(z - V)).
cplx complex_phase_dz(const Potential& v, double x, cplx z);

/// Solves S(E) = s for E in `window` by safeguarded Newton.
/// Throws OutOfRangeError if s is outside [S(a), S(b)].
double invert_action(const Potential& v, double s, Interval window);

/// Tabulated S and T on a window with cubic Hermite interpolation of S
/// (slopes are the exact T values, so dS/dE = T holds at the nodes).
class ActionTable {
 public:
  ActionTable(const Potential& v, Interval window, int nodes = 65);

  Interval window() const noexcept { return window_; }
  const std::vector<double>& energies() const noexcept { return energies_; }
  const std::vector<double>& actions() const noexcept { return actions_; }
  const std::vector<double>& periods() const noexcept { return periods_; }

  /// [S(a), S(b)]
  Interval action_range() const noexcept { return {actions_.front(), actions_.back()}; }

  double action(double energy) const;
  double period(double energy) const;
  double invert(double s) const;

 private:
  std::size_t segment(double energy) const;

  Interval window_;
  std::vector<double> energies_;
  std::vector<double> actions_;
  std::vector<double> periods_;
};

}  // namespace resonance
