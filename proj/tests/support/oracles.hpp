#pragma once

// Independent reference computations used only by the tests. None of these
// share code with the library.

#include <cmath>
#include <complex>
#include <functional>

namespace oracle {

template <class T>
T simpson_step(const std::function<T(double)>& f, double a, double b, T fa, T fm, T fb,
               T whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const T flm = f(lm), frm = f(rm);
  const T left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const T right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const T delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson with Richardson correction.
template <class T = double>
T simpson(const std::function<T(double)>& f, double a, double b, double tol = 1e-13) {
  const T fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const T whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

/// Central difference with one Richardson extrapolation, O(step^4).
template <class F>
auto derivative(F f, double x, double step) {
  const auto d1 = (f(x + step) - f(x - step)) / (2.0 * step);
  const auto d2 = (f(x + 0.5 * step) - f(x - 0.5 * step)) / step;
  return (4.0 * d2 - d1) / 3.0;
}

/// Same along a complex direction.
template <class F>
std::complex<double> derivative_z(F f, std::complex<double> z, double step) {
  const auto d1 = (f(z + step) - f(z - step)) / (2.0 * step);
  const auto d2 = (f(z + 0.5 * step) - f(z - 0.5 * step)) / step;
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace oracle
