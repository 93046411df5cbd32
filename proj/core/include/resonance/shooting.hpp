#pragma once

#include <complex>
#include <vector>

#include "resonance/potential.hpp"
#include "resonance/quadrature.hpp"

namespace resonance {

/// Solution of (hD)^2 u + (V - z) u = 0 at x, stored as (u, h u'). The
/// true solution is (u, v) * exp(log_scale).
struct ShootState {
  double x = 0.0;
  cplx u;
  cplx v;  ///< h u'; hD u = -i v
  cplx log_scale;
};

struct ShootOptions {
  /// Per-step bound on the Taylor tail relative to |u| + |v|.
  double tol = 1e-14;
  /// Renormalize when |u| + |v| leaves [1/threshold, threshold].
  double renormalize_threshold = 1e8;
  int max_steps = 1'000'000;
  int taylor_order = 32;
};

struct ShootResult {
  ShootState state;
  cplx du;  ///< d u / dz, same scale as state
  cplx dv;  ///< d v / dz
  int steps = 0;
  int renormalizations = 0;
};

/// Integrates from x = 0 to x = L starting at the given data (and
/// variational data du, dv). Piece boundaries are mandatory step nodes.
/// Throws IntegrationBudgetError when max_steps is exceeded.
ShootResult integrate(const Potential& v, cplx z, double h, ShootState initial, cplx du0,
                      cplx dv0, const ShootOptions& options = {});

/// Outgoing start u(0) = 1, hD u(0) = -z^{1/2}, integrated to L.
ShootResult integrate_out(const Potential& v, cplx z, double h,
                          const ShootOptions& options = {});

/// R(z) = hD u(L) - z^{1/2} u(L) for the outgoing-at-0 solution.
///
/// `value` and `derivative_dz` are both divided by the positive
/// `normalization` = max(|u(L)|, |v(L)|) of the scaled state, so their
/// ratio is the Newton step and arg(value) = arg R. The holomorphic R is
/// raw() = value * normalization * exp(scale_exponent).
struct OutgoingResidual {
  cplx z;
  cplx value;
  cplx derivative_dz;
  cplx scale_exponent;
  double normalization = 1.0;

  cplx raw() const { return value * normalization * std::exp(scale_exponent); }
  cplx raw_derivative() const { return derivative_dz * normalization * std::exp(scale_exponent); }
};

OutgoingResidual outgoing_residual(const Potential& v, cplx z, double h,
                                   const ShootOptions& options = {});

/// Exact residual for V = v0 on [0, L] (single constant piece), normalized
/// as outgoing_residual. Up to a nonvanishing factor it is
/// r^2 exp(2 i kappa L / h) - 1, kappa = (z - v0)^{1/2},
/// r = (z^{1/2} - kappa) / (z^{1/2} + kappa).
OutgoingResidual transfer_matrix_constant(double v0, double support_right, cplx z, double h);

/// r^2 exp(2 i kappa L / h) - 1
cplx constant_well_condition(double v0, double support_right, cplx z, double h);

/// All roots of r^2 exp(2 i kappa L / h) = 1 with Re z in `re_range` and
/// -depth <= Im z <= 0, solved branch by branch from the closed form.
std::vector<cplx> constant_well_roots(double v0, double support_right, double h,
                                      Interval re_range, double depth);

}  // namespace resonance
