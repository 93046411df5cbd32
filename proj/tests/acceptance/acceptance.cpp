// Acceptance suite. `acceptance N` checks criterion N (1..8), `acceptance`
// checks all of them. Each criterion prints one PASS/FAIL line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "resonance/asymptotic.hpp"
#include "resonance/dynamics.hpp"
#include "resonance/errors.hpp"
#include "resonance/quadrature.hpp"
#include "resonance/rootfind.hpp"
#include "resonance/shooting.hpp"
#include "resonance/wkb.hpp"

using namespace resonance;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double hlog(double h) { return h * std::log(1.0 / h); }

Potential step_well() { return Potential::constant(1.0); }
Potential parabola() { return Potential::polynomial({0.0, 1.0, -1.0}); }
Potential mixed() { return Potential::polynomial({0.0, 0.0, 1.0, -3.0, 3.0, -1.0}); }
Potential cubic_left() { return Potential::polynomial({0.0, 0.0, 0.0, 1.0, -1.0}); }

LocateOptions locate_options() {
  LocateOptions opts;
  opts.parallel_depth = 2;
  return opts;
}

// Computed roots for V on [a, b] (Re window widened by `widen` on both sides)
// paired against the closed-form predictions.
struct PairedRun {
  std::vector<ResonancePrediction> predicted;
  LocateResult located;
  MatchTable table;
  double seconds = 0.0;
};

PairedRun paired_run(const Potential& v, Interval window, double h, bool widen) {
  const auto t0 = std::chrono::steady_clock::now();
  PairedRun run;
  const Asymptotics a(v, window);
  run.predicted = a.predict_all(h);
  double pad = 0.0;
  if (widen && run.predicted.size() >= 2) {
    double spacing = INFINITY;
    for (std::size_t i = 1; i < run.predicted.size(); ++i)
      spacing = std::min(spacing, run.predicted[i].z.real() - run.predicted[i - 1].z.real());
    pad = 0.5 * spacing;
  }
  const SpectralWindow w{window.lo - pad, window.hi + pad, a.default_depth_multiplier(h), h};
  run.located = locate_all(w, v, locate_options());
  run.table = match_predictions(run.located.roots, run.predicted, h, widen ? 3 : 1);
  run.seconds = seconds_since(t0);
  return run;
}

Verdict criterion1() {
  Verdict v;
  const Potential pot = step_well();
  const Asymptotics a(pot, {2.0, 3.0});
  for (double h : {0.05, 0.02, 0.01}) {
    const auto t0 = std::chrono::steady_clock::now();
    const SpectralWindow w{2.0, 3.0, a.default_depth_multiplier(h), h};
    const auto located = locate_all(w, pot, locate_options());
    const auto exact = constant_well_roots(1.0, 1.0, h, {2.0, 3.0}, w.depth());
    const double secs = seconds_since(t0);
    double worst = 0.0;
    bool counts = located.complete() && located.roots.size() == exact.size();
    if (counts)
      for (std::size_t i = 0; i < exact.size(); ++i)
        worst = std::max(worst, std::abs(located.roots[i].z - exact[i]));
    v.detail << " h=" << h << ": " << located.roots.size() << "/" << exact.size()
             << " roots, max|dz|=" << worst << ", " << secs << "s;";
    v.require(counts, "root count at h=" + std::to_string(h));
    v.require(worst <= 1e-8, "|dz| <= 1e-8 at h=" + std::to_string(h));
    v.require(secs <= 60.0, "runtime at h=" + std::to_string(h));
  }
  return v;
}

Verdict criterion2() {
  Verdict v;
  std::vector<double> maxima;
  for (double h : {0.02, 0.01, 0.005}) {
    PairedRun run;
    try {
      run = paired_run(parabola(), {1.5, 2.5}, h, true);
    } catch (const MismatchError& e) {
      v.require(false, std::string("pairing at h: ") + e.what());
      continue;
    }
    const auto& t = run.table;
    v.detail << " h=" << h << ": paired " << t.pairs.size() << "/" << run.predicted.size()
             << ", max norm=" << t.max_normalized << ", " << run.seconds << "s;";
    v.require(run.located.complete(), "certified search at h=" + std::to_string(h));
    v.require(t.unmatched_predicted.empty() && t.pairs.size() == run.predicted.size(),
              "every n in N(h) paired at h=" + std::to_string(h));
    v.require(t.unique, "unique pairing at h=" + std::to_string(h));
    if (h == 0.005) v.require(run.seconds <= 600.0, "runtime at h=0.005");
    maxima.push_back(t.max_normalized);
  }
  if (maxima.size() == 3) {
    const double spread = *std::max_element(maxima.begin(), maxima.end()) /
                          *std::min_element(maxima.begin(), maxima.end());
    v.detail << " spread=" << spread;
    v.require(spread <= 3.0, "normalized error spread <= 3");
  }
  return v;
}

Verdict criterion3() {
  Verdict v;
  const double h = 0.005;
  const Potential pot = parabola();
  const auto run = paired_run(pot, {1.5, 2.5}, h, true);
  std::map<int, double> energy;
  for (const auto& p : run.predicted) energy[p.n] = p.energy;
  double worst = 0.0, worst_full = 0.0;
  int outside = 0;
  for (const auto& pair : run.table.pairs) {
    const double expected = 1.0 / period(pot, energy.at(pair.n));
    const double measured = -pair.computed.imag() / hlog(h);
    const double rel = std::abs(measured - expected) / expected;
    worst = std::max(worst, rel);
    if (rel > 0.15) ++outside;
    // Diagnostic only: depth against the full closed form including its
    // O(h) term.
    worst_full = std::max(worst_full, std::abs(pair.computed.imag() / pair.predicted.imag() - 1.0));
  }
  v.detail << " " << run.table.pairs.size() << " roots, worst relative deviation " << worst
           << ", " << outside << " outside 15%; against the full closed-form depth "
           << worst_full;
  v.require(!run.table.pairs.empty(), "roots found");
  v.require(outside == 0, "depth within 15% of 1/T(E_n)");
  return v;
}

Verdict criterion4() {
  Verdict v;
  struct Case {
    const char* name;
    Potential pot;
    Interval window;
    std::vector<double> hs;
  };
  const std::vector<Case> cases{{"step", step_well(), {2.0, 3.0}, {0.05, 0.02, 0.01}},
                                {"x(1-x)", parabola(), {1.5, 2.5}, {0.02, 0.01, 0.005}},
                                {"x^2(1-x)^3", mixed(), {1.0, 2.0}, {0.01}}};
  for (const auto& c : cases) {
    const Asymptotics a(c.pot, c.window);
    for (double h : c.hs) {
      const SpectralWindow w{c.window.lo, c.window.hi, a.default_depth_multiplier(h), h};
      const auto located = locate_all(w, c.pot, locate_options());
      const int certified = static_cast<int>(located.roots.size());
      const int expected = static_cast<int>(a.index_set(h).size());
      v.detail << " " << c.name << " h=" << h << ": " << certified << " vs " << expected << ";";
      const std::string tag = std::string(c.name) + " h=" + std::to_string(h);
      v.require(located.complete(), "certified search " + tag);
      v.require(std::abs(certified - expected) <= 1, "count within 1 " + tag);
    }
  }
  return v;
}

Verdict criterion5() {
  Verdict v;
  std::vector<double> constants;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto run = paired_run(parabola(), {1.5, 2.5}, h, false);
    std::vector<std::pair<int, cplx>> labelled;
    for (const auto& pair : run.table.pairs) labelled.emplace_back(pair.n, pair.computed);
    const double c = spacing_constant(labelled, h);
    v.detail << " h=" << h << ": c=" << c << ";";
    v.require(c > 0.0 && std::isfinite(c), "positive spacing at h=" + std::to_string(h));
    constants.push_back(c);
  }
  const double ratio = *std::max_element(constants.begin(), constants.end()) /
                       *std::min_element(constants.begin(), constants.end());
  v.detail << " ratio=" << ratio;
  v.require(ratio <= 2.0, "spacing constant stable within factor 2");
  return v;
}

Verdict criterion6() {
  Verdict v;
  const Potential pot = parabola();
  const Interval window{1.5, 2.5};
  const auto report = gap_report(pot, window);
  bool equal = true;
  for (const auto& s : report.samples)
    equal = equal && std::abs(s.band - s.gap) <= 1e-10 * s.band;
  v.detail << " alpha/diam=" << report.nu0_bound << ", band_top=" << report.band_top << ";";
  v.require(report.consistent, "band >= gap at every sample");
  v.require(equal, "band == gap for k = l");

  const Asymptotics a(pot, window);
  for (double h : {0.01, 0.005}) {
    const double line = -0.9 * report.nu0_bound * hlog(h) + 5.0 * h;
    LocateOptions opts = locate_options();
    if (line < 0.0) opts.depth_levels = {line};
    const SpectralWindow w{window.lo, window.hi, a.default_depth_multiplier(h), h};
    const auto located = locate_all(w, pot, opts);
    int above = 0;
    for (const auto& r : located.roots)
      if (r.z.imag() > line) ++above;
    const int band_above = located.bands.empty() ? 0 : located.bands.front().count;
    v.detail << " h=" << h << ": line=" << line << ", roots above=" << above
             << ", winding above=" << band_above << ";";
    v.require(located.complete(), "certified search at h=" + std::to_string(h));
    v.require(above == 0 && band_above == 0, "no root above gap line at h=" + std::to_string(h));
  }
  return v;
}

Verdict criterion7() {
  Verdict v;
  const cplx z(2.0, -0.1);
  struct Case {
    const char* name;
    Potential pot;
    Endpoint endpoint;
    int order;
  };
  const std::vector<Case> cases{{"x(1-x) at 0", parabola(), Endpoint::Left, 1},
                                {"x^2(1-x)^3 at 0", mixed(), Endpoint::Left, 2},
                                {"x^2(1-x)^3 at L", mixed(), Endpoint::Right, 3},
                                {"x^3(1-x) at 0", cubic_left(), Endpoint::Left, 3}};
  double worst_rel = 0.0, worst_lower = 0.0;
  for (const auto& c : cases) {
    const auto r = verify_psiatvanishing(c.pot, z, c.endpoint);
    v.require(r.order == c.order, std::string("order of ") + c.name);
    worst_rel = std::max(worst_rel, r.relative_error);
    worst_lower = std::max(worst_lower, r.lower_order_max);
  }
  double worst_anti = 0.0;
  for (const Potential& pot : {parabola(), mixed(), cubic_left()}) {
    auto anti = [&](double x, Side side) {
      const cplx p = wkb_jets(pot, z, x, side, 1, WkbSign::Plus)[1].value();
      const cplx m = wkb_jets(pot, z, x, side, 1, WkbSign::Minus)[1].value();
      worst_anti = std::max(worst_anti, std::abs(p + m));
    };
    anti(0.0, Side::Right);
    anti(1.0, Side::Left);
    for (int i = 1; i <= 10; ++i) anti(i / 11.0, Side::TwoSided);
  }
  v.detail << " max relative error=" << worst_rel << ", max |psi+1 + psi-1|=" << worst_anti
           << ", max lower-order |psi_j|=" << worst_lower;
  v.require(worst_rel <= 1e-10, "closed form at vanishing order");
  v.require(worst_anti <= 1e-12, "first-order antisymmetry");
  v.require(worst_lower <= 1e-12, "lower orders vanish");
  return v;
}

Verdict criterion8() {
  Verdict v;
  double ds_err = 0.0, flow_err = 0.0, var_err = 0.0;
  for (const Potential& pot : {parabola(), mixed()}) {
    for (int i = 0; i < 20; ++i) {
      const double e = 1.0 + 0.1 * i, step = 1e-3;
      auto s = [&](double x) { return action(pot, x); };
      const double d1 = (s(e + step) - s(e - step)) / (2.0 * step);
      const double d2 = (s(e + 0.5 * step) - s(e - 0.5 * step)) / step;
      ds_err = std::max(ds_err, std::abs((4.0 * d2 - d1) / 3.0 - period(pot, e)));
    }
    for (int i = 0; i < 10; ++i) {
      const double e = 1.0 + 0.2 * i;
      flow_err = std::max(flow_err, std::abs(traversal_time(pot, e) - period(pot, e)));
    }
    for (cplx z : {cplx(1.6, -0.04), cplx(2.0, -0.1), cplx(2.4, -0.15)}) {
      const double h = 0.02, step = 1e-5;
      auto raw = [&](cplx w) { return outgoing_residual(pot, w, h).raw(); };
      const cplx fd = (raw(z + step) - raw(z - step)) / (2.0 * step);
      const cplx exact = outgoing_residual(pot, z, h).raw_derivative();
      var_err = std::max(var_err, std::abs(fd - exact) / std::abs(exact));
    }
  }
  std::size_t splits = 0, broken = 0;
  for (double h : {0.02, 0.01}) {
    const Asymptotics a(parabola(), {1.5, 2.5});
    const SpectralWindow w{1.5, 2.5, a.default_depth_multiplier(h), h};
    const auto located = locate_all(w, parabola(), locate_options());
    for (const auto& s : located.splits) {
      ++splits;
      if (s.parent_count != s.children_sum) ++broken;
    }
    if (located.certified_count() != located.total_count) ++broken;
  }
  v.detail << " |dS/dE - T|=" << ds_err << ", |flow - T|=" << flow_err
           << ", variational rel err=" << var_err << ", " << splits << " splits, " << broken
           << " violations";
  v.require(ds_err <= 1e-8, "dS/dE = T");
  v.require(flow_err <= 1e-6, "flow traversal = T");
  v.require(var_err <= 1e-5, "variational derivative");
  v.require(broken == 0 && splits > 0, "winding conservation");
  return v;
}

const std::vector<std::pair<const char*, std::function<Verdict()>>> kCriteria{
    {"oracle equivalence (step well)", criterion1},
    {"error scaling O(h^2 log^2(1/h))", criterion2},
    {"depth law within 15%", criterion3},
    {"counting |N(h)| +- 1", criterion4},
    {"spacing constant", criterion5},
    {"gap consistency", criterion6},
    {"WKB identities", criterion7},
    {"numerical cross-checks", criterion8}};

bool report(int n) {
  const auto& [name, fn] = kCriteria.at(n - 1);
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = fn();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail << " [exception: " << e.what() << "]";
  }
  std::printf("criterion %d %s: %s (%.1fs)%s\n", n, name, v.pass ? "PASS" : "FAIL",
              seconds_since(t0), v.detail.str().c_str());
  std::fflush(stdout);
  return v.pass;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "usage: acceptance [1-8]...\n");
      return 2;
    }
    which.push_back(n);
  }
  if (which.empty())
    for (int n = 1; n <= static_cast<int>(kCriteria.size()); ++n) which.push_back(n);
  bool all = true;
  for (int n : which) all = report(n) && all;
  return all ? 0 : 1;
}
