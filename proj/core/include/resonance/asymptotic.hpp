#pragma once

#include <complex>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "resonance/potential.hpp"
#include "resonance/quadrature.hpp"

namespace resonance {

enum class Tier { ClosedForm, QcNewton };

std::string_view to_string(Tier tier);
std::optional<Tier> tier_from_string(std::string_view s);

struct ResonancePrediction {
  int n = 0;
  double h = 0.0;
  double energy = 0.0;  ///< E_n = S^{-1}(pi h (n + offset))
  cplx w;               ///< z - E_n
  cplx z;
  Tier tier = Tier::ClosedForm;
  int iterations = 0;     ///< Newton steps (QcNewton only)
  double residual = 0.0;  ///< |G(z)| (QcNewton only)
};

/// Endpoint data that drives the resonance asymptotics.
struct EndpointData {
  VanishingOrders orders;
  double left_derivative = 0.0;   ///< V^(k)(0+)
  double right_derivative = 0.0;  ///< V^(l)(L-)
  double phase_shift = 0.0;       ///< arg(V^(k)(0+) V^(l)(L-)) / (2 pi)

  double product() const noexcept { return left_derivative * right_derivative; }
  int order_sum() const noexcept { return orders.k + orders.l; }
};

/// Rejects V == 0 and potentials with interior interfaces.
EndpointData endpoint_data(const Potential& v);

/// (1 / 2 pi) arg(V^(k)(0+) V^(l)(L-)), principal argument in (-pi, pi].
double phase_shift(const Potential& v);

/// Phase offset theta in S(E_n) = pi h (n + theta).
double quantization_offset(const EndpointData& data);

/// min_{m != n} |z_n - z_m| / (h |n - m|) over labelled resonances.
double spacing_constant(const std::vector<std::pair<int, cplx>>& labelled, double h);

/// Closed-form and quantization-condition resonance predictions for one
/// potential on one spectral window [a, b] (a > sup V).
class Asymptotics {
 public:
  Asymptotics(Potential v, Interval window);

  const Potential& potential() const noexcept { return v_; }
  const EndpointData& endpoints() const noexcept { return data_; }
  Interval window() const noexcept { return window_; }
  /// [S(a), S(b)]
  Interval action_range() const noexcept { return range_; }
  double offset() const noexcept { return offset_; }

  /// N(h): all n with pi h (n + offset) in [S(a), S(b)], ascending.
  std::vector<int> index_set(double h) const;

  /// Closed-form z_n = E_n + w_n. Throws IndexError if n is not in N(h).
  ResonancePrediction predict(int n, double h) const;
  std::vector<ResonancePrediction> predict_all(double h) const;

  /// w_n for a given E, the root of F(., E, h) nearest the real axis. Pure
  /// imaginary when l - k is even; otherwise it carries the real part
  /// -sgn(l - k) pi h / (2 T(E)).
  cplx correction(double energy, double h) const;

  /// F(w, E, h) = i^{l-k} h^{l+k} (2 E^{1/2})^{-l-k-4} P e^{2i(S(E) + w T(E))/h} - 1
  cplx localizer(cplx w, double energy, double h) const;
  cplx localizer_dw(cplx w, double energy, double h) const;

  /// G(z) = i^{l-k} h^{l+k} (2 z^{1/2})^{-l-k-4} P e^{2 i phi(L; z)/h} - 1
  cplx qc_function(cplx z, double h) const;
  /// G and dG/dz together.
  std::pair<cplx, cplx> qc_function_and_derivative(cplx z, double h) const;

  /// Newton on G from the seed. Throws NoConvergenceError after 50 steps.
  ResonancePrediction solve_qc(double h, const ResonancePrediction& seed) const;

  /// Search depth multiplier M for the window [a, b] - i[0, M h log(1/h)].
  double default_depth_multiplier(double h) const;

 private:
  Potential v_;
  Interval window_;
  EndpointData data_;
  Interval range_;
  double offset_ = 0.0;
};

}  // namespace resonance
