#include "resonance/jet.hpp"

#include <algorithm>

#include "resonance/errors.hpp"

namespace resonance {

Jet::Jet(double base, Side side, std::vector<value_type> coefficients)
    : base_(base), side_(side), c_(std::move(coefficients)) {
  if (c_.empty()) throw DegreeExhaustionError("jet needs at least a constant term");
}

Jet Jet::constant(double base, Side side, value_type c, int degree) {
  std::vector<value_type> coeffs(std::max(degree, 0) + 1, value_type{});
  coeffs[0] = c;
  return Jet(base, side, std::move(coeffs));
}

Jet Jet::from_real(double base, Side side, std::span<const double> coefficients) {
  return Jet(base, side, std::vector<value_type>(coefficients.begin(), coefficients.end()));
}

Jet::value_type Jet::operator()(double t) const {
  value_type acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Jet Jet::derivative() const {
  if (c_.size() < 2)
    throw DegreeExhaustionError("cannot differentiate a degree-0 jet: Taylor data exhausted");
  std::vector<value_type> d(c_.size() - 1);
  for (std::size_t j = 0; j + 1 < c_.size(); ++j) d[j] = static_cast<double>(j + 1) * c_[j + 1];
  return Jet(base_, side_, std::move(d));
}

Jet Jet::reciprocal() const {
  if (c_[0] == value_type{}) throw DegenerateOrderError("reciprocal of a jet vanishing at its base");
  std::vector<value_type> r(c_.size());
  r[0] = 1.0 / c_[0];
  for (std::size_t n = 1; n < c_.size(); ++n) {
    value_type acc{};
    for (std::size_t j = 1; j <= n; ++j) acc += c_[j] * r[n - j];
    r[n] = -acc * r[0];
  }
  return Jet(base_, side_, std::move(r));
}

Jet Jet::sqrt() const {
  if (c_[0].real() <= 0.0 && c_[0].imag() == 0.0)
    throw BranchError("square root of a jet whose constant term lies on the branch cut");
  std::vector<value_type> s(c_.size());
  s[0] = std::sqrt(c_[0]);
  const value_type inv = 1.0 / (2.0 * s[0]);
  for (std::size_t n = 1; n < c_.size(); ++n) {
    value_type acc = c_[n];
    for (std::size_t j = 1; j < n; ++j) acc -= s[j] * s[n - j];
    s[n] = acc * inv;
  }
  return Jet(base_, side_, std::move(s));
}

Jet Jet::truncated(int degree) const {
  if (degree > this->degree()) throw DegreeExhaustionError("cannot raise jet degree by truncation");
  return Jet(base_, side_, std::vector<value_type>(c_.begin(), c_.begin() + degree + 1));
}

Jet& Jet::operator+=(const Jet& o) {
  c_.resize(std::min(c_.size(), o.c_.size()));
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  c_.resize(std::min(c_.size(), o.c_.size()));
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
  return *this;
}

Jet& Jet::operator*=(value_type s) {
  for (auto& c : c_) c *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const std::size_t n = std::min(a.c_.size(), b.c_.size());
  std::vector<Jet::value_type> p(n);
  for (std::size_t k = 0; k < n; ++k) {
    Jet::value_type acc{};
    for (std::size_t j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
    p[k] = acc;
  }
  return Jet(a.base_, a.side_, std::move(p));
}

}  // namespace resonance
