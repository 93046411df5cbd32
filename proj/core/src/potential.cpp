#include "resonance/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {
namespace {

constexpr double kOrderTol = 1e-12;

double position_tol(double support_right) { return 1e-14 * std::max(1.0, support_right); }

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

std::vector<double> polynomial_taylor(const Polynomial& p, double x0, int degree) {
  // Repeated synthetic division by (x - x0) yields the Taylor coefficients.
  std::vector<double> work = p.coefficients;
  std::vector<double> out(degree + 1, 0.0);
  const int n = static_cast<int>(work.size());
  for (int j = 0; j < n && j <= degree; ++j) {
    for (int i = n - 2; i >= j; --i) work[i] += x0 * work[i + 1];
    out[j] = work[j];
  }
  return out;
}

std::vector<double> gaussian_taylor(const GaussianBump& g, double x0, int degree) {
  // exp(-(y0 + s)^2) = exp(-y0^2) exp(-2 y0 s - s^2), s = t / width.
  const double y0 = (x0 - g.center) / g.width;
  std::vector<double> d(degree + 1, 0.0);
  d[0] = 1.0;
  if (degree >= 1) d[1] = -2.0 * y0;
  for (int n = 1; n < degree; ++n) d[n + 1] = (-2.0 * y0 * d[n] - 2.0 * d[n - 1]) / (n + 1);
  const double base = g.amplitude * std::exp(-y0 * y0);
  double scale = 1.0;
  for (int n = 0; n <= degree; ++n) {
    d[n] *= base * scale;
    scale /= g.width;
  }
  return d;
}

void validate_term(const Term& term) {
  std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          if (t.coefficients.empty()) throw ValidationError("polynomial term has no coefficients");
          for (double c : t.coefficients)
            if (!std::isfinite(c)) throw ValidationError("polynomial coefficient is not finite");
        } else if constexpr (std::is_same_v<T, Sine>) {
          if (!std::isfinite(t.amplitude) || !std::isfinite(t.frequency) || !std::isfinite(t.phase))
            throw ValidationError("sine term has non-finite parameters");
        } else if constexpr (std::is_same_v<T, Exponential>) {
          if (!std::isfinite(t.amplitude) || !std::isfinite(t.rate))
            throw ValidationError("exponential term has non-finite parameters");
        } else {
          if (!(t.width > 0.0) || !std::isfinite(t.width))
            throw ValidationError("gaussian bump width must be positive");
          if (!std::isfinite(t.amplitude) || !std::isfinite(t.center))
            throw ValidationError("gaussian bump has non-finite parameters");
        }
      },
      term);
}

bool term_is_zero(const Term& term) {
  return std::visit(
      [](const auto& t) {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          return std::all_of(t.coefficients.begin(), t.coefficients.end(),
                             [](double c) { return c == 0.0; });
        } else {
          return t.amplitude == 0.0;
        }
      },
      term);
}

}  // namespace

std::vector<double> term_taylor(const Term& term, double x0, int degree) {
  if (degree < 0) return {};
  return std::visit(
      [&](const auto& t) -> std::vector<double> {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          return polynomial_taylor(t, x0, degree);
        } else if constexpr (std::is_same_v<T, Sine>) {
          std::vector<double> out(degree + 1);
          const double arg = t.frequency * x0 + t.phase;
          double scale = t.amplitude;
          for (int m = 0; m <= degree; ++m) {
            out[m] = scale * std::sin(arg + 0.5 * std::numbers::pi * m);
            scale *= t.frequency / (m + 1);
          }
          return out;
        } else if constexpr (std::is_same_v<T, Exponential>) {
          std::vector<double> out(degree + 1);
          double scale = t.amplitude * std::exp(t.rate * x0);
          for (int m = 0; m <= degree; ++m) {
            out[m] = scale;
            scale *= t.rate / (m + 1);
          }
          return out;
        } else {
          return gaussian_taylor(t, x0, degree);
        }
      },
      term);
}

Potential::Potential(double support_right, std::vector<Piece> pieces,
                     std::map<double, int> declared_orders)
    : support_right_(support_right), pieces_(std::move(pieces)) {
  if (!(support_right_ > 0.0) || !std::isfinite(support_right_))
    throw ValidationError("support_right must be a positive finite number");
  if (pieces_.empty()) throw ValidationError("potential needs at least one piece");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& a, const Piece& b) { return a.left < b.left; });

  const double tol = position_tol(support_right_);
  if (std::abs(pieces_.front().left) > tol)
    throw ValidationError("first piece must start at x = 0");
  if (std::abs(pieces_.back().right - support_right_) > tol)
    throw ValidationError("last piece must end at x = support_right");
  pieces_.front().left = 0.0;
  pieces_.back().right = support_right_;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    Piece& p = pieces_[i];
    if (!(p.right > p.left)) throw ValidationError("piece has empty or reversed subinterval");
    if (i + 1 < pieces_.size()) {
      if (std::abs(pieces_[i + 1].left - p.right) > tol) {
        std::ostringstream os;
        os << "pieces are not contiguous at x = " << p.right;
        throw ValidationError(os.str());
      }
      pieces_[i + 1].left = p.right;
    }
    for (const Term& t : p.terms) validate_term(t);
  }

  interfaces_.push_back(0.0);
  for (const Piece& p : pieces_) interfaces_.push_back(p.right);

  is_zero_ = std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) {
    return std::all_of(p.terms.begin(), p.terms.end(), term_is_zero);
  });

  declared_.assign(interfaces_.size(), std::nullopt);
  for (const auto& [where, order] : declared_orders) {
    auto idx = interface_index(where);
    if (!idx) {
      std::ostringstream os;
      os << "declared order at x = " << where << " does not name an interface";
      throw ValidationError(os.str());
    }
    if (order < 0) throw ValidationError("declared order must be nonnegative");
    declared_[*idx] = order;
  }
  maximum_ = maximize(*this);
}

Potential Potential::constant(double value, double support_right) {
  return Potential(support_right, {Piece{0.0, support_right, {Polynomial{{value}}}}});
}

Potential Potential::polynomial(std::vector<double> coefficients, double support_right) {
  return Potential(support_right,
                   {Piece{0.0, support_right, {Polynomial{std::move(coefficients)}}}});
}

std::optional<std::size_t> Potential::interface_index(double x) const {
  const double tol = position_tol(support_right_);
  for (std::size_t i = 0; i < interfaces_.size(); ++i)
    if (std::abs(interfaces_[i] - x) <= tol) return i;
  return std::nullopt;
}

std::optional<std::size_t> Potential::piece_at(double x, Side side) const {
  if (auto idx = interface_index(x)) {
    if (side == Side::TwoSided)
      throw InterfaceAmbiguityError("side is mandatory at an interface");
    // Interface i sits between piece i-1 (left) and piece i (right).
    if (side == Side::Left) {
      if (*idx == 0) return std::nullopt;
      return *idx - 1;
    }
    if (*idx == pieces_.size()) return std::nullopt;
    return *idx;
  }
  if (x < 0.0 || x > support_right_) return std::nullopt;
  auto it = std::upper_bound(interfaces_.begin(), interfaces_.end(), x);
  return static_cast<std::size_t>(it - interfaces_.begin()) - 1;
}

std::vector<double> Potential::taylor(double x0, int degree, Side side) const {
  std::vector<double> out(std::max(degree, 0) + 1, 0.0);
  auto piece = piece_at(x0, side);
  if (!piece) return out;
  for (const Term& t : pieces_[*piece].terms) {
    auto c = term_taylor(t, x0, degree);
    for (int j = 0; j <= degree; ++j) out[j] += c[j];
  }
  return out;
}

double Potential::eval(double x, int m, Side side) const {
  if (m < 0) throw ValidationError("derivative order must be nonnegative");
  if (interface_index(x) && side == Side::TwoSided) {
    const double left = taylor(x, m, Side::Left)[m] * factorial(m);
    const double right = taylor(x, m, Side::Right)[m] * factorial(m);
    if (std::abs(left - right) > kOrderTol * std::max({1.0, std::abs(left), std::abs(right)})) {
      std::ostringstream os;
      os << "one-sided derivatives of order " << m << " differ at interface x = " << x << " ("
         << left << " vs " << right << ")";
      throw InterfaceAmbiguityError(os.str());
    }
    return 0.5 * (left + right);
  }
  return taylor(x, m, side)[m] * factorial(m);
}

double Potential::jump(std::size_t interface, int j) const {
  const double y = interfaces_.at(interface);
  const double f = factorial(j);
  return (taylor(y, j, Side::Right)[j] - taylor(y, j, Side::Left)[j]) * f;
}

std::optional<int> Potential::declared_order(std::size_t interface) const {
  return declared_.at(interface);
}

int Potential::interface_order(std::size_t interface) const {
  if (declared_.at(interface)) return *declared_[interface];
  const double y = interfaces_[interface];
  auto left = taylor(y, kMaxOrder, Side::Left);
  auto right = taylor(y, kMaxOrder, Side::Right);
  double f = 1.0;
  for (int j = 0; j <= kMaxOrder; ++j) {
    if (j > 0) f *= j;
    const double jl = left[j] * f;
    const double jr = right[j] * f;
    const double scale = std::max({1.0, std::abs(jl), std::abs(jr)});
    if (std::abs(jr - jl) > kOrderTol * scale) return j;
  }
  return kMaxOrder + 1;
}

VanishingOrders vanishing_orders(const Potential& v) {
  if (v.is_zero()) throw DegenerateOrderError("V is identically zero: vanishing orders undefined");
  const std::size_t last = v.interfaces().size() - 1;
  auto order_at = [&](std::size_t idx) {
    const int order = v.interface_order(idx);
    if (order > Potential::kMaxOrder) {
      std::ostringstream os;
      os << "V vanishes to infinite order at x = " << v.interfaces()[idx];
      throw DegenerateOrderError(os.str());
    }
    const double leading = std::abs(v.jump(idx, order));
    const double tol = kOrderTol * std::max(1.0, leading);
    for (int j = 0; j < order; ++j) {
      if (std::abs(v.jump(idx, j)) > tol) {
        std::ostringstream os;
        os << "declared order " << order << " at x = " << v.interfaces()[idx]
           << " is inconsistent: derivative " << j << " jumps by " << v.jump(idx, j);
        throw ValidationError(os.str());
      }
    }
    if (!(leading > tol)) {
      std::ostringstream os;
      os << "declared order " << order << " at x = " << v.interfaces()[idx]
         << " is inconsistent: derivative " << order << " does not jump";
      throw ValidationError(os.str());
    }
    return order;
  };
  return {order_at(0), order_at(last)};
}

Maximum maximize(const Potential& v) { return maximize_on(v, 0.0, v.support_right()); }

Maximum maximize_on(const Potential& v, double x_lo, double x_hi) {
  Maximum best{-std::numeric_limits<double>::infinity(), 0.0};
  auto consider = [&](double x, double value) {
    if (value > best.value) best = {value, x};
  };
  constexpr int kSamples = 512;
  for (const Piece& full : v.pieces()) {
    Piece p{std::max(full.left, x_lo), std::min(full.right, x_hi), {}};
    if (!(p.right >= p.left)) continue;
    const auto& terms = full.terms;
    auto value = [&](double x, int m) {
      double s = 0.0;
      for (const Term& t : terms) s += term_taylor(t, x, m)[m];
      double f = 1.0;
      for (int j = 2; j <= m; ++j) f *= j;
      return s * f;
    };
    consider(p.left, value(p.left, 0));
    consider(p.right, value(p.right, 0));
    const double dx = (p.right - p.left) / kSamples;
    double x0 = p.left;
    double d0 = value(x0, 1);
    for (int s = 1; s <= kSamples; ++s) {
      const double x1 = (s == kSamples) ? p.right : p.left + s * dx;
      const double d1 = value(x1, 1);
      if (d0 > 0.0 && d1 <= 0.0) {
        // Bracketed local maximum: bisection on V' with a Newton assist.
        double lo = x0, hi = x1;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
          double mid = 0.5 * (lo + hi);
          const double dm = value(mid, 1);
          const double d2 = value(mid, 2);
          if (d2 < 0.0) {
            const double newton = mid - dm / d2;
            if (newton > lo && newton < hi) mid = newton;
          }
          if (value(mid, 1) > 0.0)
            lo = mid;
          else
            hi = mid;
        }
        const double xm = 0.5 * (lo + hi);
        consider(xm, value(xm, 0));
      }
      x0 = x1;
      d0 = d1;
    }
  }
  return best;
}

double sup_V(const Potential& v) { return v.maximum().value; }

}  // namespace resonance
