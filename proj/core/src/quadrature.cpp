#include "resonance/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {
namespace {

// Kronrod abscissae (positive half) and weights; Gauss-7 weights sit on the
// odd Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kWgk[7];
  T gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const T sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

template <class T, class F>
QuadratureResult<T> adaptive(const F& f, double a, double b, double abs_tol, int max_intervals) {
  QuadratureResult<T> out;
  if (a == b) return out;
  std::priority_queue<Segment<T>> queue;
  auto first = gk15<T>(f, a, b);
  out.evaluations = 15;
  T total = first.value;
  double error = first.error;
  queue.push(first);
  int intervals = 1;
  while (error > abs_tol && intervals < max_intervals) {
    Segment<T> worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = gk15<T>(f, worst.a, mid);
    auto right = gk15<T>(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++intervals;
  }
  // Re-sum to shed the cancellation noise of the running updates.
  total = T{};
  error = 0.0;
  while (!queue.empty()) {
    total += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  out.value = total;
  out.error = error;
  return out;
}

void require_admissible(const Potential& v, double energy) {
  if (!(energy > v.maximum().value)) {
    std::ostringstream os;
    os << "energy " << energy << " is not above sup V = " << v.maximum().value;
    throw WindowError(os.str());
  }
}

double piece_value(const Piece& p, double x) {
  double s = 0.0;
  for (const Term& t : p.terms) s += term_taylor(t, x, 0)[0];
  return s;
}

constexpr double kTol = 1e-13;

template <class T, class Integrand>
T integrate_pieces(const Potential& v, double x0, double x1, const Integrand& g) {
  T total{};
  for (const Piece& p : v.pieces()) {
    const double lo = std::max(p.left, x0);
    const double hi = std::min(p.right, x1);
    if (!(hi > lo)) continue;
    auto r = adaptive<T>([&](double s) { return g(piece_value(p, s)); }, lo, hi, kTol, 4000);
    total += r.value;
  }
  return total;
}

}  // namespace

QuadratureResult<double> gauss_kronrod(const std::function<double(double)>& f, double a,
                                       double b, double abs_tol, int max_intervals) {
  return adaptive<double>(f, a, b, abs_tol, max_intervals);
}

QuadratureResult<cplx> gauss_kronrod(const std::function<cplx(double)>& f, double a, double b,
                                     double abs_tol, int max_intervals) {
  return adaptive<cplx>(f, a, b, abs_tol, max_intervals);
}

double action(const Potential& v, double energy) {
  require_admissible(v, energy);
  return integrate_pieces<double>(v, 0.0, v.support_right(),
                                  [&](double vs) { return std::sqrt(energy - vs); });
}

double period(const Potential& v, double energy) {
  require_admissible(v, energy);
  return integrate_pieces<double>(v, 0.0, v.support_right(),
                                  [&](double vs) { return 0.5 / std::sqrt(energy - vs); });
}

double travel_time(const Potential& v, double energy, double x0, double x1) {
  if (x1 < x0) std::swap(x0, x1);
  bool blocked = false;
  double t = integrate_pieces<double>(v, x0, x1, [&](double vs) {
    if (!(energy > vs)) {
      blocked = true;
      return 0.0;
    }
    return 0.5 / std::sqrt(energy - vs);
  });
  // Free flight outside the support.
  const double L = v.support_right();
  const double free_length =
      std::max(0.0, std::min(x1, 0.0) - x0) + std::max(0.0, x1 - std::max(x0, L));
  if (free_length > 0.0) {
    if (!(energy > 0.0)) blocked = true;
    else t += free_length * 0.5 / std::sqrt(energy);
  }
  // Nodes alone can miss a narrow barrier.
  const double in_lo = std::max(x0, 0.0), in_hi = std::min(x1, L);
  if (!blocked && in_hi > in_lo && !(energy > maximize_on(v, in_lo, in_hi).value)) blocked = true;
  if (blocked) {
    std::ostringstream os;
    os << "turning point between x = " << x0 << " and x = " << x1 << " at energy " << energy;
    throw TurningPointError(os.str());
  }
  return t;
}

cplx complex_phase(const Potential& v, double x, cplx z) {
  if (!(z.real() > v.maximum().value)) {
    std::ostringstream os;
    os << "Re z = " << z.real() << " is not above sup V = " << v.maximum().value
       << ": sqrt(z - V) would cross the branch cut";
    throw BranchError(os.str());
  }
  return integrate_pieces<cplx>(v, 0.0, x, [&](double vs) { return std::sqrt(z - vs); });
}

cplx complex_phase_dz(const Potential& v, double x, cplx z) {
  if (!(z.real() > v.maximum().value))
    throw BranchError("Re z is not above sup V: sqrt(z - V) would cross the branch cut");
  return integrate_pieces<cplx>(v, 0.0, x, [&](double vs) { return 0.5 / std::sqrt(z - vs); });
}

double invert_action(const Potential& v, double s, Interval window) {
  double lo = window.lo, hi = window.hi;
  const double s_lo = action(v, lo);
  const double s_hi = action(v, hi);
  constexpr double kAbs = 1e-12;
  if (s < s_lo - kAbs || s > s_hi + kAbs) {
    std::ostringstream os;
    os << "action value " << s << " outside [" << s_lo << ", " << s_hi << "]";
    throw OutOfRangeError(os.str());
  }
  if (std::abs(s - s_lo) <= kAbs * 1e-2) return lo;
  if (std::abs(s - s_hi) <= kAbs * 1e-2) return hi;

  double energy = lo + (hi - lo) * (s - s_lo) / (s_hi - s_lo);
  for (int it = 0; it < 100; ++it) {
    const double f = action(v, energy) - s;
    if (std::abs(f) <= 1e-14 * std::max(1.0, std::abs(s))) return energy;
    if (f < 0.0)
      lo = energy;
    else
      hi = energy;
    double next = energy - f / period(v, energy);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - energy) <= 1e-16 * std::max(1.0, std::abs(energy))) return next;
    energy = next;
  }
  return energy;
}

ActionTable::ActionTable(const Potential& v, Interval window, int nodes) : window_(window) {
  if (!(window.hi > window.lo)) throw WindowError("action table needs b > a");
  if (nodes < 2) throw WindowError("action table needs at least two nodes");
  require_admissible(v, window.lo);
  energies_.resize(nodes);
  actions_.resize(nodes);
  periods_.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double e = (i == nodes - 1) ? window.hi
                                      : window.lo + (window.hi - window.lo) * i / (nodes - 1);
    energies_[i] = e;
    actions_[i] = resonance::action(v, e);
    periods_[i] = resonance::period(v, e);
    if (!(periods_[i] > 0.0)) throw ValidationError("period must be positive on the window");
    if (i > 0 && !(actions_[i] > actions_[i - 1]))
      throw ValidationError("action is not strictly increasing on the window");
  }
}

std::size_t ActionTable::segment(double energy) const {
  if (energy < window_.lo || energy > window_.hi) {
    std::ostringstream os;
    os << "energy " << energy << " outside the tabulated window";
    throw OutOfRangeError(os.str());
  }
  auto it = std::upper_bound(energies_.begin(), energies_.end(), energy);
  std::size_t i = static_cast<std::size_t>(it - energies_.begin());
  if (i == 0) i = 1;
  if (i >= energies_.size()) i = energies_.size() - 1;
  return i - 1;
}

double ActionTable::action(double energy) const {
  const std::size_t i = segment(energy);
  const double e0 = energies_[i], e1 = energies_[i + 1];
  const double w = e1 - e0;
  const double t = (energy - e0) / w;
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * actions_[i] + h10 * w * periods_[i] + h01 * actions_[i + 1] +
         h11 * w * periods_[i + 1];
}

double ActionTable::period(double energy) const {
  const std::size_t i = segment(energy);
  const double e0 = energies_[i], e1 = energies_[i + 1];
  const double w = e1 - e0;
  const double t = (energy - e0) / w;
  const double d00 = 6 * t * t - 6 * t;
  const double d10 = 3 * t * t - 4 * t + 1;
  const double d01 = -6 * t * t + 6 * t;
  const double d11 = 3 * t * t - 2 * t;
  return (d00 * actions_[i] + d01 * actions_[i + 1]) / w + d10 * periods_[i] +
         d11 * periods_[i + 1];
}

double ActionTable::invert(double s) const {
  if (s < actions_.front() || s > actions_.back()) {
    std::ostringstream os;
    os << "action value " << s << " outside the tabulated range";
    throw OutOfRangeError(os.str());
  }
  auto it = std::upper_bound(actions_.begin(), actions_.end(), s);
  std::size_t i = static_cast<std::size_t>(it - actions_.begin());
  if (i == 0) i = 1;
  if (i >= actions_.size()) i = actions_.size() - 1;
  double lo = energies_[i - 1], hi = energies_[i];
  double e = lo + (hi - lo) * (s - actions_[i - 1]) / (actions_[i] - actions_[i - 1]);
  for (int it2 = 0; it2 < 60; ++it2) {
    const double f = action(e) - s;
    if (std::abs(f) <= 1e-15 * std::max(1.0, std::abs(s))) break;
    if (f < 0.0)
      lo = e;
    else
      hi = e;
    double next = e - f / period(e);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    e = next;
  }
  return e;
}

}  // namespace resonance
