#include "resonance/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {
namespace {

constexpr cplx kI{0.0, 1.0};

cplx ipow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double one_sided_derivative(const Potential& v, double x, int order, Side side) {
  double f = 1.0;
  for (int j = 2; j <= order; ++j) f *= j;
  return v.taylor(x, order, side)[order] * f;
}

}  // namespace

std::string_view to_string(Tier tier) {
  return tier == Tier::ClosedForm ? "closed_form" : "qc_newton";
}

std::optional<Tier> tier_from_string(std::string_view s) {
  if (s == "closed_form") return Tier::ClosedForm;
  if (s == "qc_newton") return Tier::QcNewton;
  return std::nullopt;
}

EndpointData endpoint_data(const Potential& v) {
  if (v.is_zero())
    throw DegenerateOrderError("V is identically zero: no resonance asymptotics");
  if (v.has_interior_interfaces())
    throw ValidationError("resonance asymptotics need the interface set {0, L} only");
  EndpointData d;
  d.orders = vanishing_orders(v);
  d.left_derivative = one_sided_derivative(v, 0.0, d.orders.k, Side::Right);
  d.right_derivative = one_sided_derivative(v, v.support_right(), d.orders.l, Side::Left);
  const double p = d.product();
  if (p == 0.0) throw DegenerateOrderError("V^(k)(0+) V^(l)(L-) vanishes");
  d.phase_shift = std::arg(cplx{p, 0.0}) / (2.0 * std::numbers::pi);
  return d;
}

double phase_shift(const Potential& v) { return endpoint_data(v).phase_shift; }

double quantization_offset(const EndpointData& data) {
  return (data.orders.l - data.orders.k) / 4.0 + data.phase_shift;
}

double spacing_constant(const std::vector<std::pair<int, cplx>>& labelled, double h) {
  double c = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < labelled.size(); ++i)
    for (std::size_t j = i + 1; j < labelled.size(); ++j) {
      const int dn = std::abs(labelled[i].first - labelled[j].first);
      if (dn == 0) continue;
      c = std::min(c, std::abs(labelled[i].second - labelled[j].second) / (h * dn));
    }
  return c;
}

Asymptotics::Asymptotics(Potential v, Interval window) : v_(std::move(v)), window_(window) {
  if (!(window_.hi > window_.lo)) throw WindowError("window needs b > a");
  if (!(window_.lo > sup_V(v_)) || !(window_.lo > 0.0)) {
    std::ostringstream os;
    os << "window start a = " << window_.lo << " must exceed sup V = " << sup_V(v_)
       << " and 0";
    throw WindowError(os.str());
  }
  data_ = endpoint_data(v_);
  range_ = {action(v_, window_.lo), action(v_, window_.hi)};
  offset_ = quantization_offset(data_);
}

std::vector<int> Asymptotics::index_set(double h) const {
  if (!(h > 0.0)) throw OutOfRangeError("h must be positive");
  const double lo = range_.lo / (std::numbers::pi * h) - offset_;
  const double hi = range_.hi / (std::numbers::pi * h) - offset_;
  std::vector<int> out;
  for (long n = static_cast<long>(std::ceil(lo)); n <= static_cast<long>(std::floor(hi)); ++n)
    out.push_back(static_cast<int>(n));
  return out;
}

cplx Asymptotics::correction(double energy, double h) const {
  const double t = period(v_, energy);
  const int m = data_.order_sum();
  const double log_inv_h = std::log(1.0 / h);
  const double im = (-m * log_inv_h + std::log(std::abs(data_.product())) -
                     0.5 * (m + 4) * std::log(4.0 * energy)) *
                    h / (2.0 * t);
  // i^{l-k} e^{2 pi i offset} = (-1)^{l-k} sgn P; odd l - k needs a half
  // spacing to make F vanish.
  const int d = data_.orders.l - data_.orders.k;
  const double re = d % 2 == 0 ? 0.0 : -(d > 0 ? 1.0 : -1.0) * std::numbers::pi * h / (2.0 * t);
  return {re, im};
}

ResonancePrediction Asymptotics::predict(int n, double h) const {
  const double s = std::numbers::pi * h * (n + offset_);
  if (s < range_.lo || s > range_.hi) {
    std::ostringstream os;
    os << "index n = " << n << " is not in N(h) for h = " << h;
    throw IndexError(os.str());
  }
  ResonancePrediction p;
  p.n = n;
  p.h = h;
  p.energy = invert_action(v_, s, window_);
  p.w = correction(p.energy, h);
  p.z = p.energy + p.w;
  p.tier = Tier::ClosedForm;
  return p;
}

std::vector<ResonancePrediction> Asymptotics::predict_all(double h) const {
  std::vector<ResonancePrediction> out;
  for (int n : index_set(h)) out.push_back(predict(n, h));
  return out;
}

cplx Asymptotics::localizer(cplx w, double energy, double h) const {
  const int m = data_.order_sum();
  const double s = action(v_, energy);
  const double t = period(v_, energy);
  const cplx prefactor = ipow(data_.orders.l - data_.orders.k) * std::pow(h, m) *
                         std::pow(2.0 * std::sqrt(energy), -m - 4) * data_.product();
  return prefactor * std::exp(2.0 * kI * (s + w * t) / h) - 1.0;
}

cplx Asymptotics::localizer_dw(cplx w, double energy, double h) const {
  const double t = period(v_, energy);
  return (localizer(w, energy, h) + 1.0) * (2.0 * kI * t / h);
}

std::pair<cplx, cplx> Asymptotics::qc_function_and_derivative(cplx z, double h) const {
  const int m = data_.order_sum();
  const cplx phase = complex_phase(v_, v_.support_right(), z);
  const cplx phase_dz = complex_phase_dz(v_, v_.support_right(), z);
  const cplx root = std::sqrt(z);
  const cplx head = ipow(data_.orders.l - data_.orders.k) * std::pow(h, m) *
                    std::pow(2.0 * root, -m - 4) * data_.product() *
                    std::exp(2.0 * kI * phase / h);
  const cplx dlog = -(m + 4.0) / (2.0 * z) + 2.0 * kI * phase_dz / h;
  return {head - 1.0, head * dlog};
}

cplx Asymptotics::qc_function(cplx z, double h) const {
  return qc_function_and_derivative(z, h).first;
}

ResonancePrediction Asymptotics::solve_qc(double h, const ResonancePrediction& seed) const {
  constexpr int kMaxIter = 50;
  constexpr double kTol = 1e-12;
  const int m = data_.order_sum();
  const cplx constant = std::log(ipow(data_.orders.l - data_.orders.k) * data_.product()) +
                        static_cast<double>(m) * std::log(h);
  // G + 1 = exp(log_head); Newton on log_head = 2 pi i j on the seed's branch j.
  auto log_head = [&](cplx z) {
    return constant - (m + 4.0) * std::log(2.0 * std::sqrt(z)) +
           2.0 * kI * complex_phase(v_, v_.support_right(), z) / h;
  };
  cplx z = seed.z;
  // The phase 2 phi / h carries absolute rounding ~ eps |2 phi / h|.
  const double tol = kTol * std::max(1.0, 2.0 * action_range().hi / h);
  const double branch =
      2.0 * std::numbers::pi * std::round(log_head(z).imag() / (2.0 * std::numbers::pi));
  double residual = 0.0;
  for (int it = 0; it <= kMaxIter; ++it) {
    const cplx g = log_head(z) - cplx{0.0, branch};
    residual = std::abs(std::exp(g) - 1.0);
    if (residual <= tol) {
      ResonancePrediction out = seed;
      out.z = z;
      out.w = z - seed.energy;
      out.tier = Tier::QcNewton;
      out.iterations = it;
      out.residual = residual;
      return out;
    }
    if (it == kMaxIter) break;
    const cplx dg = -(m + 4.0) / (2.0 * z) +
                    2.0 * kI * complex_phase_dz(v_, v_.support_right(), z) / h;
    cplx step = g / dg;
    // Keep the iterate on the admissible side of the branch cut.
    while (!((z - step).real() > sup_V(v_))) step *= 0.5;
    z -= step;
  }
  std::ostringstream os;
  os << "quantization-condition Newton did not converge for n = " << seed.n << " (|G| = "
     << residual << ")";
  throw NoConvergenceError(os.str(), kMaxIter, residual);
}

double Asymptotics::default_depth_multiplier(double h) const {
  // Leading-order band plus one, widened to cover the O(h) term of the
  // predicted depth across the window.
  constexpr int kSamples = 33;
  double min_period = std::numeric_limits<double>::infinity();
  double deepest = 0.0;
  const double log_inv_h = std::log(1.0 / h);
  for (int i = 0; i < kSamples; ++i) {
    const double e = window_.lo + (window_.hi - window_.lo) * i / (kSamples - 1);
    min_period = std::min(min_period, period(v_, e));
    deepest = std::max(deepest, -correction(e, h).imag() / (h * log_inv_h));
  }
  const double leading = data_.order_sum() / (2.0 * min_period) + 1.0;
  return std::max(leading, 1.5 * deepest);
}

}  // namespace resonance
