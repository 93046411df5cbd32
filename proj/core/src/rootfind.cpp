#include "resonance/rootfind.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {
namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

class PhaseTracker {
 public:
  PhaseTracker(const ScalarFn& f, const ContourOptions& options) : f_(f), options_(options) {}

  cplx eval(cplx z) const {
    const cplx value = f_(z);
    if (!(std::abs(value) >= options_.zero_floor) || !std::isfinite(value.real()) ||
        !std::isfinite(value.imag())) {
      std::ostringstream os;
      os << "contour passes through (or too close to) a zero near z = " << z;
      throw ContourError(os.str());
    }
    return value;
  }

  double increment(cplx za, cplx fa, cplx zb, cplx fb, int depth) const {
    const double d = std::arg(fb / fa);
    if (std::abs(d) < kHalfPi) return d;
    if (depth >= options_.max_bisections) {
      std::ostringstream os;
      os << "phase increment could not be resolved between " << za << " and " << zb;
      throw ContourError(os.str());
    }
    const cplx zm = 0.5 * (za + zb);
    const cplx fm = eval(zm);
    return increment(za, fa, zm, fm, depth + 1) + increment(zm, fm, zb, fb, depth + 1);
  }

 private:
  const ScalarFn& f_;
  const ContourOptions& options_;
};

}  // namespace

double SpectralWindow::depth() const { return M * h * std::log(1.0 / h); }

Rect SpectralWindow::rect() const { return {a, b, -depth(), 0.0}; }

void SpectralWindow::validate(const Potential& v) const {
  std::ostringstream os;
  if (!(h > 0.0 && h < 1.0)) os << "h must lie in (0, 1); ";
  if (!(b > a)) os << "window needs b > a; ";
  if (!(a > sup_V(v))) os << "a = " << a << " must exceed sup V = " << sup_V(v) << "; ";
  if (!(a > 0.0)) os << "a must be positive; ";
  if (!(M > 0.0)) os << "M must be positive; ";
  const std::string msg = os.str();
  if (!msg.empty()) throw WindowError(msg.substr(0, msg.size() - 2));
}

int winding_number(const Rect& rect, const ScalarFn& f, const ContourOptions& options) {
  if (!(rect.width() > 0.0) || !(rect.height() > 0.0))
    throw ContourError("winding number needs a rectangle with positive area");
  PhaseTracker tracker(f, options);
  const std::array<cplx, 4> corners = {cplx{rect.re_lo, rect.im_lo}, cplx{rect.re_hi, rect.im_lo},
                                       cplx{rect.re_hi, rect.im_hi}, cplx{rect.re_lo, rect.im_hi}};
  std::array<cplx, 4> corner_values;
  for (int c = 0; c < 4; ++c) corner_values[c] = tracker.eval(corners[c]);

  const int n = std::max(options.initial_samples, 1);
  double total = 0.0;
  for (int side = 0; side < 4; ++side) {
    const cplx from = corners[side];
    const cplx to = corners[(side + 1) % 4];
    cplx za = from;
    cplx fa = corner_values[side];
    for (int j = 1; j <= n; ++j) {
      const cplx zb = (j == n) ? to : from + (to - from) * (static_cast<double>(j) / n);
      const cplx fb = (j == n) ? corner_values[(side + 1) % 4] : tracker.eval(zb);
      total += tracker.increment(za, fa, zb, fb, 0);
      za = zb;
      fa = fb;
    }
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6) throw ContourError("phase total is not an integer multiple of 2 pi");
  return static_cast<int>(rounded);
}

int count_zeros(const Rect& rect, const ScalarFn& f, double perturbation,
                const ContourOptions& options) {
  constexpr int kAttempts = 5;
  for (int attempt = 0;; ++attempt) {
    try {
      return winding_number(rect.expanded(perturbation * attempt), f, options);
    } catch (const ContourError&) {
      if (perturbation <= 0.0 || attempt + 1 >= kAttempts) throw;
    }
  }
}

int LocateResult::certified_count() const noexcept {
  int sum = static_cast<int>(roots.size());
  for (const auto& u : unresolved) sum += u.count;
  return sum;
}

namespace {

class Locator {
 public:
  Locator(const Rect& root, const ResidualFn& residual, const LocateOptions& options)
      : root_(root), residual_(residual), options_(options) {
    value_fn_ = [this](cplx z) { return evaluate(z).value; };
  }

  OutgoingResidual evaluate(cplx z) {
    const std::pair<double, double> key{z.real(), z.imag()};
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    OutgoingResidual r = residual_(z);
    std::lock_guard lock(mutex_);
    ++evaluations_;
    cache_.emplace(key, r);
    return r;
  }

  int count(const Rect& rect) { return winding_number(rect, value_fn_, options_.contour); }

  long evaluations() const { return evaluations_; }

  LocateResult search(const Rect& cell, int count, int depth) {
    LocateResult out;
    if (count == 0) return out;
    if (count == 1) {
      if (auto root = polish(cell)) {
        out.roots.push_back(*root);
        return out;
      }
    }
    if (depth >= options_.max_depth) {
      out.unresolved.push_back({cell, count});
      return out;
    }
    return split(cell, count, depth);
  }

 private:
  LocateResult split(const Rect& cell, int count, int depth) {
    const bool vertical_cut = cell.width() / root_.width() >= cell.height() / root_.height();
    static constexpr std::array<double, 7> kFractions = {0.5, 0.45, 0.55, 0.4, 0.6, 0.35, 0.65};
    for (double f : kFractions) {
      Rect first = cell, second = cell;
      if (vertical_cut) {
        const double cut = cell.re_lo + f * cell.width();
        first.re_hi = cut;
        second.re_lo = cut;
      } else {
        const double cut = cell.im_lo + f * cell.height();
        first.im_hi = cut;
        second.im_lo = cut;
      }
      int c1 = 0, c2 = 0;
      try {
        c1 = this->count(first);
        c2 = this->count(second);
      } catch (const ContourError&) {
        continue;
      }
      if (c1 < 0 || c2 < 0 || c1 + c2 != count) continue;

      LocateResult out;
      out.splits.push_back({cell, count, c1 + c2});
      LocateResult a, b;
      if (depth < options_.parallel_depth) {
        auto fa = std::async(std::launch::async, [&] { return search(first, c1, depth + 1); });
        b = search(second, c2, depth + 1);
        a = fa.get();
      } else {
        a = search(first, c1, depth + 1);
        b = search(second, c2, depth + 1);
      }
      merge(out, std::move(a));
      merge(out, std::move(b));
      return out;
    }
    LocateResult out;
    out.unresolved.push_back({cell, count});
    return out;
  }

  static void merge(LocateResult& into, LocateResult&& from) {
    into.roots.insert(into.roots.end(), from.roots.begin(), from.roots.end());
    into.splits.insert(into.splits.end(), from.splits.begin(), from.splits.end());
    into.unresolved.insert(into.unresolved.end(), from.unresolved.begin(), from.unresolved.end());
  }

  std::optional<ComputedResonance> polish(const Rect& cell) {
    cplx z = cell.center();
    cplx best = z;
    double best_value = std::numeric_limits<double>::infinity();
    int stalled = 0;
    int iters = 0;
    bool converged = false;
    for (; iters < options_.max_newton; ++iters) {
      const OutgoingResidual r = evaluate(z);
      const double value = std::abs(r.value);
      if (value < best_value) {
        best_value = value;
        best = z;
        stalled = 0;
      } else if (best_value <= 1e-12 && ++stalled >= 3) {
        // Residual is at rounding level; further steps only wander.
        converged = true;
        break;
      }
      if (value == 0.0) {
        converged = true;
        break;
      }
      const cplx step = r.value / r.derivative_dz;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return std::nullopt;
      const cplx next = z - step;
      if (!cell.contains(next)) return std::nullopt;
      z = next;
      if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(z))) {
        best = z;
        converged = true;
        ++iters;
        break;
      }
    }
    if (!converged) return std::nullopt;
    z = best;

    ComputedResonance root;
    root.z = z;
    root.newton_iters = iters;
    root.residual_norm = std::abs(evaluate(z).value);
    if (!(root.residual_norm <= options_.residual_tol)) return std::nullopt;

    const double radius = 0.5e-8 * std::max(1.0, std::abs(z));
    root.winding_cell = {z.real() - radius, z.real() + radius, z.imag() - radius,
                         z.imag() + radius};
    ContourOptions tight = options_.contour;
    tight.initial_samples = 8;
    tight.zero_floor = 0.0;
    try {
      if (winding_number(root.winding_cell, value_fn_, tight) != 1) return std::nullopt;
    } catch (const ContourError&) {
      return std::nullopt;
    }
    return root;
  }

  Rect root_;
  const ResidualFn& residual_;
  const LocateOptions& options_;
  ScalarFn value_fn_;
  std::mutex mutex_;
  std::map<std::pair<double, double>, OutgoingResidual> cache_;
  long evaluations_ = 0;
};

}  // namespace

LocateResult locate_zeros(const Rect& rect, const ResidualFn& residual,
                          const LocateOptions& options) {
  Locator locator(rect, residual, options);
  const int total = locator.count(rect);

  // Horizontal bands from the requested depth levels, top band first.
  std::vector<double> cuts;
  for (double level : options.depth_levels)
    if (level > rect.im_lo && level < rect.im_hi) cuts.push_back(level);
  std::sort(cuts.begin(), cuts.end(), std::greater<>());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  LocateResult out;
  out.total_count = total;
  std::vector<std::pair<Rect, int>> bands;
  if (cuts.empty()) {
    bands.push_back({rect, total});
  } else {
    double top = rect.im_hi;
    int sum = 0;
    for (std::size_t i = 0; i <= cuts.size(); ++i) {
      Rect band = rect;
      band.im_hi = top;
      band.im_lo = (i < cuts.size()) ? cuts[i] : rect.im_lo;
      int c = 0;
      for (int attempt = 0;; ++attempt) {
        try {
          c = locator.count(band);
          break;
        } catch (const ContourError&) {
          if (attempt >= 4 || i == cuts.size()) throw;
          // Nudge the cut off the zero it hit.
          band.im_lo -= 1e-3 * rect.height();
        }
      }
      bands.push_back({band, c});
      out.bands.push_back({band.im_hi, band.im_lo, c});
      sum += c;
      top = band.im_lo;
    }
    out.splits.push_back({rect, total, sum});
    if (sum != total) {
      out.unresolved.push_back({rect, total});
      out.evaluations = locator.evaluations();
      return out;
    }
  }

  for (const auto& [band, c] : bands) {
    LocateResult part = locator.search(band, c, 0);
    out.roots.insert(out.roots.end(), part.roots.begin(), part.roots.end());
    out.splits.insert(out.splits.end(), part.splits.begin(), part.splits.end());
    out.unresolved.insert(out.unresolved.end(), part.unresolved.begin(), part.unresolved.end());
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const auto& x, const auto& y) {
    return x.z.real() < y.z.real() || (x.z.real() == y.z.real() && x.z.imag() < y.z.imag());
  });
  out.evaluations = locator.evaluations();
  return out;
}

LocateResult locate_all(const SpectralWindow& window, const Potential& v,
                        const LocateOptions& options, const ShootOptions& shoot) {
  window.validate(v);
  const double h = window.h;
  ResidualFn residual = [&](cplx z) { return outgoing_residual(v, z, h, shoot); };
  constexpr int kAttempts = 5;
  const double perturbation = 1e-3 * h;
  for (int attempt = 0;; ++attempt) {
    try {
      return locate_zeros(window.rect().expanded(perturbation * attempt), residual, options);
    } catch (const ContourError&) {
      if (attempt + 1 >= kAttempts) throw;
    }
  }
}

MatchTable match_predictions(std::vector<ComputedResonance>& computed,
                             const std::vector<ResonancePrediction>& predicted, double h,
                             int max_cardinality_gap) {
  const long diff = static_cast<long>(computed.size()) - static_cast<long>(predicted.size());
  if (std::abs(diff) > max_cardinality_gap) {
    std::ostringstream os;
    os << "cardinality mismatch: " << computed.size() << " computed vs " << predicted.size()
       << " predicted";
    throw MismatchError(os.str());
  }
  MatchTable table;
  table.h = h;
  const double log_inv_h = std::log(1.0 / h);
  const double norm = h * h * log_inv_h * log_inv_h;

  table.min_predicted_spacing = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < predicted.size(); ++i)
    for (std::size_t j = i + 1; j < predicted.size(); ++j)
      table.min_predicted_spacing =
          std::min(table.min_predicted_spacing, std::abs(predicted[i].z - predicted[j].z));

  auto by_re = [](std::size_t n, auto key) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    return idx;
  };
  const auto ps = by_re(predicted.size(), [&](std::size_t i) { return predicted[i].z.real(); });
  const auto cs = by_re(computed.size(), [&](std::size_t i) { return computed[i].z.real(); });

  // Order-preserving alignment: predicted ps[i] pairs with computed cs[i + shift].
  const long np = static_cast<long>(ps.size()), nc = static_cast<long>(cs.size());
  long best_shift = 0, best_overlap = -1;
  double best_max = std::numeric_limits<double>::infinity();
  bool best_valid = false;
  for (long shift = -(np - 1); shift <= nc - 1; ++shift) {
    long overlap = 0;
    double worst = 0.0;
    for (long i = std::max(0L, -shift); i < np && i + shift < nc; ++i) {
      worst = std::max(worst, std::abs(predicted[ps[i]].z - computed[cs[i + shift]].z));
      ++overlap;
    }
    const bool valid = worst < 0.5 * table.min_predicted_spacing;
    const bool better = valid != best_valid ? valid
                        : overlap != best_overlap ? overlap > best_overlap
                                                  : worst < best_max;
    if (better) {
      best_shift = shift;
      best_overlap = overlap;
      best_max = worst;
      best_valid = valid;
    }
  }

  std::vector<bool> p_used(predicted.size()), c_used(computed.size());
  for (long i = std::max(0L, -best_shift); i < np && i + best_shift < nc; ++i) {
    const auto& pred = predicted[ps[i]];
    auto& comp = computed[cs[i + best_shift]];
    const double d = std::abs(pred.z - comp.z);
    table.pairs.push_back({pred.n, pred.z, comp.z, d, d / norm});
    comp.paired_index = pred.n;
    p_used[ps[i]] = c_used[cs[i + best_shift]] = true;
  }
  for (std::size_t p = 0; p < predicted.size(); ++p)
    if (!p_used[p]) table.unmatched_predicted.push_back(predicted[p].n);
  for (std::size_t c = 0; c < computed.size(); ++c)
    if (!c_used[c]) table.unmatched_computed.push_back(computed[c].z);
  std::sort(table.pairs.begin(), table.pairs.end(),
            [](const MatchPair& a, const MatchPair& b) { return a.n < b.n; });

  if (!table.pairs.empty()) {
    std::vector<double> abs_err, norm_err;
    for (const auto& p : table.pairs) {
      abs_err.push_back(p.abs_error);
      norm_err.push_back(p.normalized_error);
      if (!(p.abs_error < 0.5 * table.min_predicted_spacing)) table.unique = false;
    }
    auto median = [](std::vector<double> xs) {
      std::sort(xs.begin(), xs.end());
      const std::size_t m = xs.size() / 2;
      return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
    };
    table.max_abs = *std::max_element(abs_err.begin(), abs_err.end());
    table.max_normalized = *std::max_element(norm_err.begin(), norm_err.end());
    table.median_abs = median(abs_err);
    table.median_normalized = median(norm_err);
  }
  return table;
}

}  // namespace resonance
