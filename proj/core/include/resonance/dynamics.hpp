#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "resonance/potential.hpp"
#include "resonance/quadrature.hpp"

namespace resonance {

enum class PointType { Hyperbolic, Glancing, Elliptic };

std::string_view to_string(PointType type);

/// Per-side and combined classification of an interface point at energy E
/// (r = E - V(y+/-)).
struct InterfaceClass {
  PointType left = PointType::Elliptic;
  PointType right = PointType::Elliptic;
  PointType overall = PointType::Elliptic;
};

InterfaceClass classify_interface(const Potential& v, double y, double energy);

/// Point of the Hamilton flow of p = xi^2 + V(x): x' = 2 xi, xi' = -V'(x).
struct FlowState {
  double x = 0.0;
  double xi = 0.0;
  double t = 0.0;
};

struct FlowOptions {
  double tol = 1e-13;        ///< local error per step
  double event_tol = 1e-12;  ///< interface-crossing location in x
  int max_steps = 1'000'000;
};

struct FlowResult {
  FlowState state;
  /// Set when the flow stopped on an event: the target position or a
  /// non-Lipschitz interface.
  std::optional<double> stopped_at;
  bool reached_target = false;
  int steps = 0;
};

/// Flows for `duration`. Crossing an interface whose order is below 2 throws
/// UniquenessError (the field is not Lipschitz there).
FlowState flow(const Potential& v, FlowState state, double duration,
               const FlowOptions& options = {});

/// Flows until `target_x` is reached, a non-Lipschitz interface is met
/// (flow stops on it), or `max_duration` elapses.
FlowResult flow_until(const Potential& v, FlowState state, double max_duration,
                      std::optional<double> target_x, const FlowOptions& options = {});

/// Affine time for the trajectory leaving x = 0 rightward at energy E to
/// reach x = L. Equals T(E) for E > sup V.
double traversal_time(const Potential& v, double energy, const FlowOptions& options = {});

double energy_of(const Potential& v, const FlowState& state);

/// Longest affine travel time between two hyperbolic interface points.
/// Pairs separated by a turning point are excluded; 0 with fewer than two
/// hyperbolic points.
double diam(const Potential& v, double energy);

struct GapSample {
  double energy = 0.0;
  double diam = 0.0;
  double period = 0.0;
  double band = 0.0;  ///< (l + k) / (2 T(E))
  double gap = 0.0;   ///< alpha / diam_E (infinity when diam_E = 0)
};

struct GapReport {
  Interval window;
  int alpha = 0;
  double diam = 0.0;       ///< diam_I(Y)
  double nu0_bound = 0.0;  ///< alpha / diam_I, +infinity when diam_I = 0
  double band_top = 0.0;   ///< min over I of (l + k) / (2 T(E))
  std::vector<GapSample> samples;
  /// band(E) >= gap(E) at every sample.
  bool consistent = true;
};

/// Requires the window above sup V and Y = {0, L} for the band data.
GapReport gap_report(const Potential& v, Interval window, int samples = 33);

}  // namespace resonance
