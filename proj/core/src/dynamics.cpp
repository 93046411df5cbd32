#include "resonance/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {
namespace {

constexpr double kGlancingTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

PointType classify(double r) {
  if (r > kGlancingTol) return PointType::Hyperbolic;
  if (r >= -kGlancingTol) return PointType::Glancing;
  return PointType::Elliptic;
}

// Region between consecutive boundaries of {-inf, interfaces..., +inf};
// piece is empty outside [0, L] where V = 0.
struct Region {
  double left, right;
  const Piece* piece;
};

Region region_for(const Potential& v, double x, double xi) {
  const auto ys = v.interfaces();
  const Side side = xi >= 0.0 ? Side::Right : Side::Left;
  std::optional<std::size_t> idx = v.interface_index(x);
  std::size_t k = 0;  // region index: 0 = (-inf, 0), i = (y_{i-1}, y_i), n = (L, inf)
  if (idx) {
    k = side == Side::Right ? *idx + 1 : *idx;
  } else {
    k = static_cast<std::size_t>(std::upper_bound(ys.begin(), ys.end(), x) - ys.begin());
  }
  const double left = k == 0 ? -kInf : ys[k - 1];
  const double right = k == ys.size() ? kInf : ys[k];
  const Piece* piece = (k == 0 || k == ys.size()) ? nullptr : &v.pieces()[k - 1];
  return {left, right, piece};
}

double force(const Piece* piece, double x) {
  if (!piece) return 0.0;
  double d = 0.0;
  for (const Term& t : piece->terms) d += term_taylor(t, x, 1)[1];
  return -d;
}

struct Step {
  double x, xi, err;
};

// Dormand-Prince 5(4) step for x' = 2 xi, xi' = -V'(x).
Step dopri(const Piece* piece, double x, double xi, double s) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr std::array<double, 7> b = {35.0 / 384,     0.0,       500.0 / 1113,
                                              125.0 / 192,    -2187.0 / 6784, 11.0 / 84, 0.0};
  static constexpr std::array<double, 7> bs = {5179.0 / 57600,    0.0,          7571.0 / 16695,
                                               393.0 / 640,       -92097.0 / 339200,
                                               187.0 / 2100,      1.0 / 40};
  std::array<double, 7> kx{}, kp{};
  auto rhs = [&](int i, double xx, double pp) {
    kx[i] = 2.0 * pp;
    kp[i] = force(piece, xx);
  };
  rhs(0, x, xi);
  rhs(1, x + s * a21 * kx[0], xi + s * a21 * kp[0]);
  rhs(2, x + s * (a31 * kx[0] + a32 * kx[1]), xi + s * (a31 * kp[0] + a32 * kp[1]));
  rhs(3, x + s * (a41 * kx[0] + a42 * kx[1] + a43 * kx[2]),
      xi + s * (a41 * kp[0] + a42 * kp[1] + a43 * kp[2]));
  rhs(4, x + s * (a51 * kx[0] + a52 * kx[1] + a53 * kx[2] + a54 * kx[3]),
      xi + s * (a51 * kp[0] + a52 * kp[1] + a53 * kp[2] + a54 * kp[3]));
  rhs(5, x + s * (a61 * kx[0] + a62 * kx[1] + a63 * kx[2] + a64 * kx[3] + a65 * kx[4]),
      xi + s * (a61 * kp[0] + a62 * kp[1] + a63 * kp[2] + a64 * kp[3] + a65 * kp[4]));
  double x5 = x, p5 = xi;
  for (int i = 0; i < 6; ++i) {
    x5 += s * b[i] * kx[i];
    p5 += s * b[i] * kp[i];
  }
  rhs(6, x5, p5);
  double ex = 0.0, ep = 0.0;
  for (int i = 0; i < 7; ++i) {
    ex += s * (b[i] - bs[i]) * kx[i];
    ep += s * (b[i] - bs[i]) * kp[i];
  }
  return {x5, p5, std::max(std::abs(ex), std::abs(ep))};
}

FlowResult run_flow(const Potential& v, FlowState state, double max_duration,
                    std::optional<double> target, bool throw_on_nonlipschitz,
                    const FlowOptions& options) {
  FlowResult out;
  const double t_end = state.t + max_duration;
  double s = 1e-3;
  while (state.t < t_end) {
    const Region region = region_for(v, state.x, state.xi);
    const double remaining = t_end - state.t;
    const double trial = std::min(s, remaining);
    Step st = dopri(region.piece, state.x, state.xi, trial);
    const double scale = std::max(1.0, std::abs(state.x) + std::abs(state.xi));
    if (st.err > options.tol * scale) {
      s = trial * std::clamp(0.9 * std::pow(options.tol * scale / st.err, 0.2), 0.1, 0.9);
      continue;
    }
    if (++out.steps > options.max_steps) throw Error("flow step budget exceeded");

    const bool crossed_right = st.x > region.right;
    const bool crossed_left = st.x < region.left;
    if (!crossed_right && !crossed_left) {
      state = {st.x, st.xi, state.t + trial};
      const double grow = st.err > 0.0 ? 0.9 * std::pow(options.tol * scale / st.err, 0.2) : 5.0;
      s = trial * std::clamp(grow, 0.2, 5.0);
      if (target && std::abs(state.x - *target) <= options.event_tol) {
        out.reached_target = true;
        out.stopped_at = *target;
        break;
      }
      continue;
    }

    // Locate the crossing by Newton on the step length.
    const double y = crossed_right ? region.right : region.left;
    double sigma = trial * (y - state.x) / (st.x - state.x);
    Step at{};
    for (int it = 0; it < 50; ++it) {
      at = dopri(region.piece, state.x, state.xi, sigma);
      const double miss = at.x - y;
      if (std::abs(miss) <= options.event_tol) break;
      sigma -= miss / (2.0 * at.xi);
      sigma = std::clamp(sigma, 0.0, trial);
    }
    state = {y, at.xi, state.t + sigma};

    const auto idx = v.interface_index(y);
    if (target && std::abs(y - *target) <= options.event_tol) {
      out.reached_target = true;
      out.stopped_at = y;
      break;
    }
    if (idx && v.interface_order(*idx) < 2) {
      if (throw_on_nonlipschitz) {
        std::ostringstream os;
        os << "cannot continue the flow through x = " << y << ": interface order "
           << v.interface_order(*idx) << " < 2 leaves the Hamilton field non-Lipschitz";
        throw UniquenessError(os.str());
      }
      out.stopped_at = y;
      break;
    }
  }
  out.state = state;
  return out;
}

}  // namespace

std::string_view to_string(PointType type) {
  switch (type) {
    case PointType::Hyperbolic: return "hyperbolic";
    case PointType::Glancing: return "glancing";
    default: return "elliptic";
  }
}

InterfaceClass classify_interface(const Potential& v, double y, double energy) {
  if (!v.interface_index(y)) {
    std::ostringstream os;
    os << "x = " << y << " is not an interface";
    throw ValidationError(os.str());
  }
  const double vl = v.eval(y, 0, Side::Left);
  const double vr = v.eval(y, 0, Side::Right);
  return {classify(energy - vl), classify(energy - vr), classify(energy - std::max(vl, vr))};
}

double energy_of(const Potential& v, const FlowState& state) {
  const Side side = state.xi >= 0.0 ? Side::Right : Side::Left;
  return state.xi * state.xi + v.eval(state.x, 0, v.interface_index(state.x) ? side : Side::TwoSided);
}

FlowState flow(const Potential& v, FlowState state, double duration, const FlowOptions& options) {
  return run_flow(v, state, duration, std::nullopt, true, options).state;
}

FlowResult flow_until(const Potential& v, FlowState state, double max_duration,
                      std::optional<double> target_x, const FlowOptions& options) {
  return run_flow(v, state, max_duration, target_x, false, options);
}

double traversal_time(const Potential& v, double energy, const FlowOptions& options) {
  const double v0 = v.eval(0.0, 0, Side::Right);
  if (!(energy > v0)) throw TurningPointError("energy does not exceed V(0+)");
  FlowState start{0.0, std::sqrt(energy - v0), 0.0};
  // Affine speed is at least 2 sqrt(E - sup V); allow a generous horizon.
  const double horizon = 100.0 * v.support_right() / std::sqrt(energy - std::min(0.0, sup_V(v)) + 1e-300) + 1.0;
  FlowResult r = flow_until(v, start, horizon, v.support_right(), options);
  if (r.reached_target) return r.state.t;
  if (r.stopped_at)
    throw UniquenessError("trajectory meets a non-Lipschitz interior interface");
  throw TurningPointError("trajectory from x = 0 does not reach x = L");
}

double diam(const Potential& v, double energy) {
  std::vector<double> hyperbolic;
  for (double y : v.interfaces())
    if (classify_interface(v, y, energy).overall == PointType::Hyperbolic) hyperbolic.push_back(y);
  double best = 0.0;
  for (std::size_t i = 0; i < hyperbolic.size(); ++i)
    for (std::size_t j = i + 1; j < hyperbolic.size(); ++j) {
      try {
        best = std::max(best, travel_time(v, energy, hyperbolic[i], hyperbolic[j]));
      } catch (const TurningPointError&) {
        // Not connected at this energy.
      }
    }
  return best;
}

GapReport gap_report(const Potential& v, Interval window, int samples) {
  if (!(window.hi >= window.lo)) throw WindowError("gap window needs hi >= lo");
  if (!(window.lo > sup_V(v))) throw WindowError("gap window must lie above sup V");
  const auto orders = vanishing_orders(v);
  GapReport report;
  report.window = window;
  int alpha = std::min(orders.k, orders.l);
  for (std::size_t i = 1; i + 1 < v.interfaces().size(); ++i)
    alpha = std::min(alpha, v.interface_order(i));
  report.alpha = alpha;
  const int m = orders.k + orders.l;

  auto near_glancing = [&](double e) {
    for (double y : v.interfaces())
      for (Side s : {Side::Left, Side::Right})
        if (std::abs(e - v.eval(y, 0, s)) < 1e-8) return true;
    return false;
  };

  samples = std::max(samples, 2);
  double best_e = window.lo;
  report.band_top = kInf;
  for (int i = 0; i < samples; ++i) {
    const double e = window.lo + (window.hi - window.lo) * i / (samples - 1);
    if (near_glancing(e)) continue;
    GapSample s;
    s.energy = e;
    s.diam = diam(v, e);
    s.period = period(v, e);
    s.band = m / (2.0 * s.period);
    s.gap = s.diam > 0.0 ? alpha / s.diam : kInf;
    if (s.diam > report.diam) {
      report.diam = s.diam;
      best_e = e;
    }
    report.band_top = std::min(report.band_top, s.band);
    if (!(s.band >= s.gap * (1.0 - 1e-12))) report.consistent = false;
    report.samples.push_back(s);
  }

  // Golden-section polish of diam_E around the best grid point.
  if (window.hi > window.lo) {
    const double cell = (window.hi - window.lo) / (samples - 1);
    double lo = std::max(window.lo, best_e - cell), hi = std::min(window.hi, best_e + cell);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = diam(v, x1), f2 = diam(v, x2);
    for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = diam(v, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = diam(v, x2);
      }
    }
    report.diam = std::max({report.diam, f1, f2});
  }
  report.nu0_bound = report.diam > 0.0 ? alpha / report.diam : kInf;
  return report;
}

}  // namespace resonance
