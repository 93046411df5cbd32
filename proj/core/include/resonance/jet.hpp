#pragma once

#include <complex>
#include <span>
#include <vector>

#include "resonance/potential.hpp"

namespace resonance {

/// Truncated Taylor series c_0 + c_1 t + ... + c_K t^K of a function at a
/// base point, t = x - x0. Arithmetic is exact truncated power-series
/// algebra; binary operations truncate to the smaller degree.
class Jet {
 public:
  using value_type = std::complex<double>;

  Jet() = default;
  Jet(double base, Side side, std::vector<value_type> coefficients);
  static Jet constant(double base, Side side, value_type c, int degree);
  static Jet from_real(double base, Side side, std::span<const double> coefficients);

  double base() const noexcept { return base_; }
  Side side() const noexcept { return side_; }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const std::vector<value_type>& coefficients() const noexcept { return c_; }
  value_type operator[](int j) const { return c_.at(j); }
  value_type value() const { return c_.at(0); }

  /// Evaluates the polynomial at offset t from the base point.
  value_type operator()(double t) const;

  /// d/dx: coefficient shift, degree drops by one.
  Jet derivative() const;
  Jet reciprocal() const;
  /// Principal square root; the constant term must be off the cut.
  Jet sqrt() const;
  Jet truncated(int degree) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(value_type s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, value_type s) { return a *= s; }
  friend Jet operator*(value_type s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);

 private:
  double base_ = 0.0;
  Side side_ = Side::TwoSided;
  std::vector<value_type> c_;
};

}  // namespace resonance
