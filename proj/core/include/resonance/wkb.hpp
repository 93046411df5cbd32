#pragma once

#include <complex>
#include <vector>

#include "resonance/jet.hpp"
#include "resonance/potential.hpp"

namespace resonance {

enum class WkbSign { Plus = 1, Minus = -1 };

enum class Endpoint { Left, Right };  ///< x = 0+ or x = L-

/// Endpoint values of the exponential-form WKB coefficients psi_{+/-,j}
/// for one sign, j = 0..order.
struct WkbSeries {
  std::complex<double> z;
  WkbSign sign = WkbSign::Plus;
  int order = 0;
  std::vector<std::complex<double>> at_left;   ///< psi_{sign,j}(0+)
  std::vector<std::complex<double>> at_right;  ///< psi_{sign,j}(L-)
};

/// Jets of psi_{sign,j} at x0, j = 0..order. psi_0 = (z - V)^{1/2} and
///   psi_k = sign * i/(2 psi_0) psi_{k-1}' - 1/(2 psi_0) sum_{j=1}^{k-1} psi_j psi_{k-j}.
/// V is expanded to `v_degree` (default 2 * order); psi_j comes back with
/// degree v_degree - j. Throws DegreeExhaustionError if v_degree < order.
std::vector<Jet> wkb_jets(const Potential& v, std::complex<double> z, double x0, Side side,
                          int order, WkbSign sign, int v_degree = -1);

WkbSeries wkb_series(const Potential& v, std::complex<double> z, WkbSign sign, int order);

/// Coefficient lists for psi_+(L-) and psi_-(0+); callers assemble
/// sum_j h^j psi_j themselves.
struct EndpointValues {
  std::vector<std::complex<double>> plus_at_right;
  std::vector<std::complex<double>> minus_at_left;
};

/// Requires order >= max(k, l) for nonzero V (DegreeExhaustionError otherwise).
EndpointValues endpoint_values(const Potential& v, std::complex<double> z, int order);

/// sum_j h^j coefficients[j]
std::complex<double> assemble(const std::vector<std::complex<double>>& coefficients, double h);

/// int_0^L psi_{sign,1} = sign * (i/2) log(psi_0(L-) / psi_0(0+)), using
/// psi_{sign,1} = sign * (i/2) (log psi_0)'.
std::complex<double> integrated_first_correction(const Potential& v, std::complex<double> z,
                                                 WkbSign sign);

struct PsiAtVanishingReport {
  Endpoint endpoint = Endpoint::Left;
  int order = 0;
  /// psi_{+,order}(x0) and psi_{-,order}(x0) from the recursion. For order 0
  /// these are the deviations psi_0(x0) - z^{1/2}.
  std::complex<double> recursion_plus;
  std::complex<double> recursion_minus;
  /// -i^{+/-order} (2 z^{1/2})^{-order-1} V^(order)(x0)
  std::complex<double> closed_plus;
  std::complex<double> closed_minus;
  double relative_error = 0.0;
  /// max_{1 <= j < order} |psi_{+/-,j}(x0)|
  double lower_order_max = 0.0;
  /// The closed form is exact for order >= 1 and a first-order Taylor
  /// expansion in V(x0) / z for a step (order 0).
  bool exact = true;
};

PsiAtVanishingReport verify_psiatvanishing(const Potential& v, std::complex<double> z,
                                           Endpoint endpoint);

}  // namespace resonance
