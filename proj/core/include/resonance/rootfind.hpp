#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "resonance/asymptotic.hpp"
#include "resonance/potential.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/shooting.hpp"

namespace resonance {

/// Axis-aligned rectangle [re_lo, re_hi] x i[im_lo, im_hi].
struct Rect {
  double re_lo = 0.0;
  double re_hi = 0.0;
  double im_lo = 0.0;
  double im_hi = 0.0;

  double width() const noexcept { return re_hi - re_lo; }
  double height() const noexcept { return im_hi - im_lo; }
  cplx center() const noexcept { return {0.5 * (re_lo + re_hi), 0.5 * (im_lo + im_hi)}; }
  bool contains(cplx z) const noexcept {
    return z.real() >= re_lo && z.real() <= re_hi && z.imag() >= im_lo && z.imag() <= im_hi;
  }
  bool interior(cplx z) const noexcept {
    return z.real() > re_lo && z.real() < re_hi && z.imag() > im_lo && z.imag() < im_hi;
  }
  Rect expanded(double by) const noexcept {
    return {re_lo - by, re_hi + by, im_lo - by, im_hi + by};
  }
};

/// [a, b] - i[0, M h log(1/h)]
struct SpectralWindow {
  double a = 0.0;
  double b = 0.0;
  double M = 1.0;
  double h = 0.01;

  double depth() const;
  Rect rect() const;
  /// a > sup V, a > 0, b > a, depth > 0; throws WindowError otherwise.
  void validate(const Potential& v) const;
};

using ScalarFn = std::function<cplx(cplx)>;
using ResidualFn = std::function<OutgoingResidual(cplx)>;

struct ContourOptions {
  int initial_samples = 64;  ///< per side
  int max_bisections = 40;
  double zero_floor = 1e-13;  ///< |f| below this on the contour counts as a hit
};

/// Winding number of f around the boundary of rect by phase tracking: every
/// sampled increment of arg f stays below pi/2 (segments are bisected until
/// it does). Throws ContourError if f (nearly) vanishes on the contour.
int winding_number(const Rect& rect, const ScalarFn& f, const ContourOptions& options = {});

/// winding_number, retrying on a rectangle grown by perturbation * attempt
/// (up to 5 attempts) when the contour passes through a zero.
int count_zeros(const Rect& rect, const ScalarFn& f, double perturbation = 0.0,
                const ContourOptions& options = {});

struct ComputedResonance {
  cplx z;
  double residual_norm = 0.0;
  Rect winding_cell;  ///< certifying box with winding number 1
  int newton_iters = 0;
  std::optional<int> paired_index;
};

struct SplitRecord {
  Rect parent;
  int parent_count = 0;
  int children_sum = 0;
};

struct UnresolvedCell {
  Rect cell;
  int count = 0;
};

struct LocateOptions {
  ContourOptions contour;
  /// Imaginary levels (negative numbers) at which the window is cut before
  /// ordinary subdivision, e.g. -nu h log(1/h) for gap reporting.
  std::vector<double> depth_levels;
  int max_newton = 60;
  double residual_tol = 1e-10;  ///< normalized |R| accepted after polishing
  int max_depth = 60;
  /// Subtrees above this recursion depth are searched with std::async.
  int parallel_depth = 0;
};

struct BandCount {
  double im_hi = 0.0;
  double im_lo = 0.0;
  int count = 0;
};

struct LocateResult {
  std::vector<ComputedResonance> roots;  ///< sorted by Re z
  int total_count = 0;                   ///< winding of the full window
  std::vector<SplitRecord> splits;       ///< one per accepted subdivision
  std::vector<UnresolvedCell> unresolved;
  std::vector<BandCount> bands;  ///< counts between consecutive depth levels
  long evaluations = 0;

  bool complete() const noexcept { return unresolved.empty(); }
  /// Sum of final-cell windings; equals total_count when certified complete.
  int certified_count() const noexcept;
};

/// All zeros of the residual inside rect: winding count, subdivision to
/// cells of winding <= 1, Newton polish with the supplied derivative and a
/// final winding-1 box of radius <= 1e-8 max(1, |z|) per root.
LocateResult locate_zeros(const Rect& rect, const ResidualFn& residual,
                          const LocateOptions& options = {});

/// locate_zeros on the window with the shooting residual of V.
LocateResult locate_all(const SpectralWindow& window, const Potential& v,
                        const LocateOptions& options = {}, const ShootOptions& shoot = {});

struct MatchPair {
  int n = 0;
  cplx predicted;
  cplx computed;
  double abs_error = 0.0;
  double normalized_error = 0.0;  ///< |dz| / (h^2 log^2(1/h))
};

struct MatchTable {
  double h = 0.0;
  std::vector<MatchPair> pairs;  ///< sorted by n
  std::vector<int> unmatched_predicted;
  std::vector<cplx> unmatched_computed;
  double max_abs = 0.0;
  double median_abs = 0.0;
  double max_normalized = 0.0;
  double median_normalized = 0.0;
  double min_predicted_spacing = 0.0;
  /// Every pairing displacement is below half the smallest predicted spacing.
  bool unique = true;
};

/// Pairs computed roots with predictions along Re z, choosing the alignment
/// shift whose displacements stay below half the predicted spacing with the
/// largest overlap; assigns paired_index on the computed list. Throws
/// MismatchError if the list sizes differ by more than max_cardinality_gap.
MatchTable match_predictions(std::vector<ComputedResonance>& computed,
                             const std::vector<ResonancePrediction>& predicted, double h,
                             int max_cardinality_gap = 1);

}  // namespace resonance
