#include "resonance/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {
namespace {

constexpr cplx kI{0.0, 1.0};

struct Taylor4 {
  cplx u, v, du, dv;
};

// One Taylor step of length s for
//   u' = v / h,  v' = (V - z) u / h,
//   du' = dv / h, dv' = ((V - z) du - u) / h.
// `w` holds the Taylor coefficients of V - z at the step start.
// Returns the state at x + s and writes the tail estimate to `tail`.
Taylor4 taylor_step(const std::vector<cplx>& w, const Taylor4& y0, double s, double h,
                    int order, std::vector<cplx>& scratch, double& tail) {
  const int n_max = order;
  scratch.assign(4 * (n_max + 1) + (n_max + 1), cplx{});
  cplx* U = scratch.data();
  cplx* Vv = U + (n_max + 1);
  cplx* P = Vv + (n_max + 1);
  cplx* Q = P + (n_max + 1);
  cplx* ws = Q + (n_max + 1);  // scaled coefficients w_j s^j

  double sj = 1.0;
  for (int j = 0; j <= n_max; ++j) {
    ws[j] = j < static_cast<int>(w.size()) ? w[j] * sj : cplx{};
    sj *= s;
  }
  const double r = s / h;
  U[0] = y0.u;
  Vv[0] = y0.v;
  P[0] = y0.du;
  Q[0] = y0.dv;
  for (int n = 0; n < n_max; ++n) {
    cplx conv_u{}, conv_p{};
    for (int j = 0; j <= n; ++j) {
      conv_u += ws[j] * U[n - j];
      conv_p += ws[j] * P[n - j];
    }
    const double f = r / (n + 1);
    U[n + 1] = f * Vv[n];
    Vv[n + 1] = f * conv_u;
    P[n + 1] = f * Q[n];
    Q[n + 1] = f * (conv_p - U[n]);
  }
  Taylor4 y{};
  for (int n = n_max; n >= 0; --n) {
    y.u += U[n];
    y.v += Vv[n];
    y.du += P[n];
    y.dv += Q[n];
  }
  tail = std::abs(U[n_max]) + std::abs(U[n_max - 1]) + std::abs(Vv[n_max]) +
         std::abs(Vv[n_max - 1]);
  return y;
}

std::vector<double> piece_taylor(const Piece& p, double x, int degree) {
  std::vector<double> out(degree + 1, 0.0);
  for (const Term& t : p.terms) {
    auto c = term_taylor(t, x, degree);
    for (int j = 0; j <= degree; ++j) out[j] += c[j];
  }
  return out;
}

}  // namespace

ShootResult integrate(const Potential& v, cplx z, double h, ShootState initial, cplx du0,
                      cplx dv0, const ShootOptions& options) {
  if (!(h > 0.0)) throw OutOfRangeError("h must be positive");
  const int order = std::max(options.taylor_order, 4);
  ShootResult result;
  Taylor4 y{initial.u, initial.v, du0, dv0};
  cplx log_scale = initial.log_scale;
  std::vector<cplx> scratch;
  std::vector<cplx> w(order + 1);

  // Taylor tail ~ (s kappa / h)^N / N!, so aim for s kappa / h near 4.
  double step = 0.0;
  for (const Piece& piece : v.pieces()) {
    double x = piece.left;
    while (x < piece.right) {
      const auto vt = piece_taylor(piece, x, order);
      for (int j = 0; j <= order; ++j) w[j] = vt[j];
      w[0] -= z;
      const double kappa = std::sqrt(std::abs(w[0])) + 1e-300;
      const double natural = 4.0 * h / kappa;
      if (step <= 0.0) step = natural;
      step = std::min(step, piece.right - x);

      Taylor4 next{};
      double tail = 0.0;
      for (;;) {
        next = taylor_step(w, y, step, h, order, scratch, tail);
        const double scale = std::abs(y.u) + std::abs(y.v);
        const double err = tail / std::max(scale, 1e-300);
        if (err <= options.tol || step <= 1e-14 * std::max(1.0, piece.right)) {
          const double grow = err > 0.0 ? 0.9 * std::pow(options.tol / err, 1.0 / order) : 2.0;
          const double taken = step;
          x = (piece.right - x <= taken) ? piece.right : x + taken;
          step = taken * std::clamp(grow, 0.2, 2.0);
          break;
        }
        step *= std::clamp(0.9 * std::pow(options.tol / err, 1.0 / order), 0.1, 0.5);
      }
      y = next;
      if (++result.steps > options.max_steps) {
        std::ostringstream os;
        os << "integration budget of " << options.max_steps << " steps exceeded (h = " << h
           << ", tol = " << options.tol << ")";
        throw IntegrationBudgetError(os.str(), h, options.tol);
      }

      const double size = std::abs(y.u) + std::abs(y.v);
      if (size > options.renormalize_threshold || size < 1.0 / options.renormalize_threshold) {
        y.u /= size;
        y.v /= size;
        y.du /= size;
        y.dv /= size;
        log_scale += std::log(size);
        ++result.renormalizations;
      }
    }
  }
  result.state = {v.support_right(), y.u, y.v, log_scale};
  result.du = y.du;
  result.dv = y.dv;
  return result;
}

ShootResult integrate_out(const Potential& v, cplx z, double h, const ShootOptions& options) {
  const cplx root = std::sqrt(z);
  // u(0) = 1, hD u(0) = -i v(0) = -z^{1/2}.
  ShootState start{0.0, 1.0, -kI * root, 0.0};
  return integrate(v, z, h, start, 0.0, -kI / (2.0 * root), options);
}

OutgoingResidual outgoing_residual(const Potential& v, cplx z, double h,
                                   const ShootOptions& options) {
  const ShootResult r = integrate_out(v, z, h, options);
  const cplx root = std::sqrt(z);
  const cplx value = -kI * r.state.v - root * r.state.u;
  const cplx derivative = -kI * r.dv - root * r.du - r.state.u / (2.0 * root);
  const double norm = std::max(std::abs(r.state.u), std::abs(r.state.v));
  return {z, value / norm, derivative / norm, r.state.log_scale, norm};
}

OutgoingResidual transfer_matrix_constant(double v0, double support_right, cplx z, double h) {
  const cplx root = std::sqrt(z);
  const cplx kappa = std::sqrt(z - v0);
  const double L = support_right;
  const cplx theta = kappa * L / h;
  const cplx v_init = -kI * root;
  const cplx dv_init = -kI / (2.0 * root);
  const cplx dkappa = 1.0 / (2.0 * kappa);
  const cplx dtheta = dkappa * L / h;
  const cplx c = std::cos(theta), s = std::sin(theta);

  const cplx u = c + (v_init / kappa) * s;
  const cplx vv = -kappa * s + v_init * c;
  const cplx du = -s * dtheta + (dv_init / kappa - v_init * dkappa / (kappa * kappa)) * s +
                  (v_init / kappa) * c * dtheta;
  const cplx dvv = -dkappa * s - kappa * c * dtheta + dv_init * c - v_init * s * dtheta;

  const cplx value = -kI * vv - root * u;
  const cplx derivative = -kI * dvv - root * du - u / (2.0 * root);
  const double norm = std::max(std::abs(u), std::abs(vv));
  return {z, value / norm, derivative / norm, 0.0, norm};
}

cplx constant_well_condition(double v0, double support_right, cplx z, double h) {
  const cplx root = std::sqrt(z);
  const cplx kappa = std::sqrt(z - v0);
  const cplx r = (root - kappa) / (root + kappa);
  return r * r * std::exp(2.0 * kI * kappa * support_right / h) - 1.0;
}

std::vector<cplx> constant_well_roots(double v0, double support_right, double h,
                                      Interval re_range, double depth) {
  std::vector<cplx> roots;
  if (v0 == 0.0) return roots;
  if (!(re_range.lo > std::max(v0, 0.0)))
    throw WindowError("constant-well roots need Re z above max(V0, 0)");
  const double L = support_right;
  // Branch n: 2 i kappa L / h + 2 log r(z) = 2 pi i n.
  auto g = [&](cplx z, int n) {
    const cplx root = std::sqrt(z);
    const cplx kappa = std::sqrt(z - v0);
    const cplx value = 2.0 * kI * kappa * L / h + 2.0 * std::log(root - kappa) -
                       2.0 * std::log(root + kappa) - 2.0 * kI * std::numbers::pi * double(n);
    const cplx dr = 0.5 / root;
    const cplx dk = 0.5 / kappa;
    const cplx dvalue = 2.0 * kI * dk * L / h + 2.0 * (dr - dk) / (root - kappa) -
                        2.0 * (dr + dk) / (root + kappa);
    return std::pair{value, dvalue};
  };
  const double k_lo = std::sqrt(re_range.lo - v0);
  const double k_hi = std::sqrt(re_range.hi - v0);
  const int n_lo = static_cast<int>(std::floor(k_lo * L / (std::numbers::pi * h))) - 3;
  const int n_hi = static_cast<int>(std::ceil(k_hi * L / (std::numbers::pi * h))) + 3;
  for (int n = n_lo; n <= n_hi; ++n) {
    const double k0 = std::numbers::pi * h * n / L;
    if (k0 <= 0.0) continue;
    cplx z = v0 + k0 * k0;
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
      const auto [f, df] = g(z, n);
      cplx step = f / df;
      while (!((z - step).real() > std::max(v0, 0.0))) step *= 0.5;
      z -= step;
      if (std::abs(step) <= 1e-15 * std::abs(z)) {
        ok = true;
        break;
      }
    }
    if (!ok) continue;
    if (z.real() >= re_range.lo && z.real() <= re_range.hi && z.imag() <= 0.0 &&
        z.imag() >= -depth)
      roots.push_back(z);
  }
  std::sort(roots.begin(), roots.end(),
            [](cplx a, cplx b) { return a.real() < b.real(); });
  return roots;
}

}  // namespace resonance
