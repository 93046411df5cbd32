#include "resonance/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <cmath>
#include <future>
#include <numeric>
#include <ostream>
#include <sstream>

#include "resonance/cli/io.hpp"
#include "resonance/errors.hpp"

namespace resonance::cli {
namespace {

using nlohmann::json;

struct Validation {
  std::string name;
  std::optional<double> h;
  bool passed = false;
  std::string detail;
};

struct Outcome {
  double h = 0.0;
  int code = kExitOk;
  std::vector<std::string> files;
  double wall_time = 0.0;
  json summary = json::object();
  std::vector<Validation> validations;
  std::vector<std::string> messages;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

json document(std::string_view kind, double h) {
  return json{{"schema", "resonance-lab/" + std::string(kind)},
              {"schema_version", kSchemaVersion},
              {"h", h}};
}

bool is_constant_well(const Potential& v, double& value) {
  if (v.pieces().size() != 1) return false;
  const Piece& p = v.pieces().front();
  if (p.terms.size() != 1) return false;
  const auto* poly = std::get_if<Polynomial>(&p.terms.front());
  if (!poly) return false;
  for (std::size_t i = 1; i < poly->coefficients.size(); ++i)
    if (poly->coefficients[i] != 0.0) return false;
  value = poly->coefficients.empty() ? 0.0 : poly->coefficients[0];
  return true;
}

class Runner {
 public:
  Runner(Command command, const RunConfig& config) : command_(command), config_(config),
                                                     sink_(config.output) {
    try {
      asym_.emplace(config.potential, config.window);
    } catch (const resonance::Error& e) {
      asym_error_ = e.what();
    }
    const bool needs_asymptotics = command == Command::Predict || command == Command::Compare ||
                                   command == Command::Count || command == Command::Gap;
    if (needs_asymptotics && !asym_)
      throw ConfigError("potential is not admissible for resonance asymptotics: " + asym_error_);
    if (command == Command::Oracle && !is_constant_well(config.potential, well_))
      throw ConfigError("oracle needs a potential made of one constant piece");
    if (command == Command::Oracle && well_ == 0.0)
      throw ConfigError("oracle needs a nonzero constant well");
    if (!asym_ && !config.M)
      throw ConfigError("M must be given when the potential has no resonance asymptotics (" +
                        asym_error_ + ")");
    if (command == Command::Gap) gap_.emplace(gap_report(config.potential, config.window));
  }

  int run(std::ostream& log) {
    std::vector<std::future<Outcome>> jobs;
    for (double h : config_.h_list)
      jobs.push_back(std::async(std::launch::async, [this, h] { return timed(h); }));
    std::vector<Outcome> outcomes;
    for (auto& job : jobs) outcomes.push_back(job.get());

    std::vector<Validation> validations;
    for (const auto& o : outcomes) {
      for (const auto& m : o.messages) log << "h = " << h_tag(o.h) << ": " << m << '\n';
      validations.insert(validations.end(), o.validations.begin(), o.validations.end());
    }
    json summary = aggregate(outcomes, validations);

    int code = kExitOk;
    for (const auto& o : outcomes) code = std::max(code, o.code);

    std::vector<std::string> all_files;
    if (gap_) {
      json doc = document("gap_report", 0.0);
      doc.erase("h");
      doc["report"] = *gap_;
      sink_.write_json("gap_report.json", doc);
      all_files.push_back("gap_report.json");
    }
    for (const auto& o : outcomes) all_files.insert(all_files.end(), o.files.begin(), o.files.end());
    bool files_ok = true;
    for (const auto& f : all_files) {
      const auto path = sink_.directory() / f;
      if (!std::filesystem::exists(path)) files_ok = false;
      if (path.extension() == ".json") {
        try {
          std::ifstream in(path);
          const json parsed = json::parse(in);
          files_ok = files_ok && !parsed.is_discarded();
        } catch (const std::exception&) {
          files_ok = false;
        }
      }
    }
    validations.push_back({"result_files_round_trip", std::nullopt, files_ok,
                           std::to_string(all_files.size()) + " files"});

    json manifest{{"schema", "resonance-lab/manifest"},
                  {"schema_version", kSchemaVersion},
                  {"artifact_version", kArtifactVersion},
                  {"command", std::string(to_string(command_))},
                  {"config_hash", config_hash(config_.text)},
                  {"window", {config_.window.lo, config_.window.hi}},
                  {"h_list", config_.h_list},
                  {"tier", std::string(to_string(config_.tier))},
                  {"deterministic", config_.deterministic}};
    if (gap_) manifest["gap_report"] = "gap_report.json";
    json runs = json::array();
    for (const auto& o : outcomes) {
      json run{{"h", o.h},
               {"files", o.files},
               {"status", o.code == kExitOk        ? "ok"
                          : o.code == kExitPartial ? "partial"
                                                   : "numerical_failure"},
               {"summary", o.summary}};
      if (!config_.deterministic) run["wall_time_s"] = o.wall_time;
      runs.push_back(run);
    }
    manifest["runs"] = runs;
    if (!summary.empty()) manifest["summary"] = summary;
    json checks = json::array();
    for (const auto& v : validations) {
      json entry{{"name", v.name}, {"passed", v.passed}, {"detail", v.detail}};
      if (v.h) entry["h"] = *v.h;
      checks.push_back(entry);
      if (!v.passed)
        log << "validation failed: " << v.name << (v.h ? " (h = " + h_tag(*v.h) + ")" : "")
            << ": " << v.detail << '\n';
    }
    manifest["validations"] = checks;
    manifest["exit_code"] = code;
    sink_.write_json("manifest.json", manifest);
    return code;
  }

 private:
  Outcome timed(double h) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    out.h = h;
    try {
      switch (command_) {
        case Command::Predict: predict(out); break;
        case Command::Compute: compute(out); break;
        case Command::Compare: compare(out); break;
        case Command::Count: count(out); break;
        case Command::Gap: gap(out); break;
        case Command::Oracle: oracle(out); break;
      }
    } catch (const MismatchError& e) {
      out.code = kExitPartial;
      out.messages.push_back(std::string("mismatch: ") + e.what());
    } catch (const resonance::Error& e) {
      out.code = kExitNumerical;
      out.messages.push_back(std::string("numerical failure: ") + e.what());
    }
    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }

  std::vector<ResonancePrediction> predictions(double h, Outcome& out) const {
    auto preds = asym_->predict_all(h);
    if (config_.tier == Tier::QcNewton)
      for (auto& p : preds) p = asym_->solve_qc(h, p);
    if (preds.empty()) out.messages.push_back("warning: N(h) is empty; nothing to predict");
    return preds;
  }

  double depth_multiplier(double h) const {
    return config_.M ? *config_.M : asym_->default_depth_multiplier(h);
  }

  LocateResult locate(double h, Outcome& out, std::vector<double> levels = {}) const {
    SpectralWindow window{config_.window.lo, config_.window.hi, depth_multiplier(h), h};
    LocateOptions options;
    options.residual_tol = config_.tolerances.residual;
    options.depth_levels = std::move(levels);
    ShootOptions shoot;
    shoot.tol = config_.tolerances.shoot;
    LocateResult result = locate_all(window, config_.potential, options, shoot);
    out.summary["M"] = window.M;
    out.summary["depth"] = window.depth();
    out.summary["winding_total"] = result.total_count;
    out.summary["certified"] = static_cast<int>(result.roots.size());
    out.summary["unresolved_cells"] = static_cast<int>(result.unresolved.size());
    out.summary["residual_evaluations"] = result.evaluations;
    bool conserved = true;
    for (const auto& s : result.splits) conserved = conserved && s.parent_count == s.children_sum;
    out.validations.push_back({"winding_conservation", h, conserved,
                               std::to_string(result.splits.size()) + " splits"});
    if (!result.complete()) {
      out.code = std::max(out.code, static_cast<int>(kExitPartial));
      out.messages.push_back(std::to_string(result.unresolved.size()) +
                             " unresolved cell(s); results are partial");
    }
    return result;
  }

  json located_json(const LocateResult& r, double h) const {
    json doc = document("computed", h);
    doc["window"] = Rect{config_.window.lo, config_.window.hi,
                         -depth_multiplier(h) * h * std::log(1.0 / h), 0.0};
    doc["total_count"] = r.total_count;
    doc["complete"] = r.complete();
    doc["records"] = r.roots;
    json unresolved = json::array();
    for (const auto& u : r.unresolved) unresolved.push_back({{"cell", u.cell}, {"count", u.count}});
    doc["unresolved"] = unresolved;
    return doc;
  }

  void add(Outcome& out, const std::string& name, const json& doc) {
    sink_.write_json(name, doc);
    out.files.push_back(name);
  }

  void add_text(Outcome& out, const std::string& name, const std::string& text) {
    sink_.write_text(name, text);
    out.files.push_back(name);
  }

  void predict(Outcome& out) {
    const double h = out.h;
    const auto preds = predictions(h, out);
    json doc = document("predictions", h);
    doc["records"] = preds;
    add(out, "predictions_h" + h_tag(h) + ".json", doc);
    add_text(out, "predictions_h" + h_tag(h) + ".csv", predictions_csv(preds));
    out.summary["count"] = static_cast<int>(preds.size());
  }

  void compute(Outcome& out) {
    const double h = out.h;
    LocateResult r = locate(h, out);
    if (asym_) {
      try {
        auto preds = asym_->predict_all(h);
        (void)match_predictions(r.roots, preds, h);
      } catch (const MismatchError&) {
        // Labels are optional for compute.
      }
    }
    add(out, "computed_h" + h_tag(h) + ".json", located_json(r, h));
    add_text(out, "computed_h" + h_tag(h) + ".csv", computed_csv(r.roots, h));
  }

  void compare(Outcome& out) {
    const double h = out.h;
    const auto preds = predictions(h, out);
    LocateResult r = locate(h, out);
    const MatchTable table = match_predictions(r.roots, preds, h);
    json doc = document("compare", h);
    doc["table"] = table;
    add(out, "compare_h" + h_tag(h) + ".json", doc);
    std::ostringstream csv;
    csv.precision(17);
    csv << "n,h,re_predicted,im_predicted,re_computed,im_computed,abs_error,normalized_error\n";
    for (const auto& p : table.pairs)
      csv << p.n << ',' << h << ',' << p.predicted.real() << ',' << p.predicted.imag() << ','
          << p.computed.real() << ',' << p.computed.imag() << ',' << p.abs_error << ','
          << p.normalized_error << '\n';
    add_text(out, "compare_h" + h_tag(h) + ".csv", csv.str());
    out.summary["pairs"] = static_cast<int>(table.pairs.size());
    out.summary["max_normalized"] = table.max_normalized;
    out.summary["median_normalized"] = table.median_normalized;
    out.summary["max_abs"] = table.max_abs;
    out.validations.push_back({"pairing_unique", h, table.unique,
                               "max |dz| " + fmt(table.max_abs) + " vs spacing " +
                                   fmt(table.min_predicted_spacing)});
  }

  void count(Outcome& out) {
    const double h = out.h;
    const int expected = static_cast<int>(asym_->index_set(h).size());
    LocateResult r = locate(h, out);
    json doc = document("count", h);
    doc["winding_total"] = r.total_count;
    doc["certified"] = static_cast<int>(r.roots.size());
    doc["index_set_size"] = expected;
    doc["complete"] = r.complete();
    add(out, "count_h" + h_tag(h) + ".json", doc);
    out.summary["index_set_size"] = expected;
    out.validations.push_back({"count_matches_index_set", h,
                               std::abs(static_cast<int>(r.roots.size()) - expected) <= 1,
                               std::to_string(r.roots.size()) + " certified vs |N(h)| = " +
                                   std::to_string(expected)});
  }

  void gap(Outcome& out) {
    const double h = out.h;
    const double scale = h * std::log(1.0 / h);
    const double nu0 = gap_->nu0_bound;
    std::vector<double> levels;
    if (std::isfinite(nu0)) levels.push_back(-0.9 * nu0 * scale + 5.0 * h);
    LocateResult r = locate(h, out, levels);
    double band_top = std::numeric_limits<double>::infinity();
    int above = 0;
    for (const auto& root : r.roots) {
      band_top = std::min(band_top, -root.z.imag() / scale);
      if (!levels.empty() && root.z.imag() > levels.front()) ++above;
    }
    double max_period = 0.0;
    for (const auto& s : gap_->samples) max_period = std::max(max_period, s.period);
    const auto orders = asym_->endpoints().orders;
    const double predicted = (orders.k + orders.l) / (2.0 * max_period);

    json doc = document("gap", h);
    doc["empirical_band_top"] = r.roots.empty() ? json(nullptr) : json(band_top);
    doc["predicted_band_top"] = predicted;
    doc["nu0_bound"] = std::isfinite(nu0) ? json(nu0) : json(nullptr);
    doc["gap_line"] = levels.empty() ? json(nullptr) : json(levels.front());
    doc["roots_above_gap_line"] = above;
    doc["bands"] = json::array();
    for (const auto& b : r.bands)
      doc["bands"].push_back({{"im_hi", b.im_hi}, {"im_lo", b.im_lo}, {"count", b.count}});
    add(out, "gap_h" + h_tag(h) + ".json", doc);

    out.summary["empirical_band_top"] = doc["empirical_band_top"];
    out.summary["predicted_band_top"] = predicted;
    out.validations.push_back({"no_roots_above_gap_line", h, above == 0,
                               std::to_string(above) + " root(s) above the line"});
    if (!r.roots.empty()) {
      const double rel = std::abs(band_top - predicted) / predicted;
      out.validations.push_back({"band_top_within_15_percent", h, rel <= 0.15,
                                 "empirical " + fmt(band_top) + " vs " + fmt(predicted) +
                                     " (relative " + fmt(rel) + ")"});
    }
    // Flow traversal against the quadrature period at the window ends.
    FlowOptions flow;
    flow.tol = config_.tolerances.flow;
    double worst = 0.0;
    for (double e : {config_.window.lo, config_.window.hi}) {
      try {
        worst = std::max(worst, std::abs(traversal_time(config_.potential, e, flow) -
                                         period(config_.potential, e)));
      } catch (const UniquenessError&) {
        // Non-Lipschitz interior interface: no flow cross-check.
      }
    }
    out.validations.push_back({"flow_traversal_matches_period", h, worst <= 1e-6,
                               "max |traversal - T| " + fmt(worst)});
  }

  void oracle(Outcome& out) {
    const double h = out.h;
    LocateResult r = locate(h, out);
    const double depth = depth_multiplier(h) * h * std::log(1.0 / h);
    const auto exact = constant_well_roots(well_, config_.potential.support_right(), h,
                                           config_.window, depth);
    std::vector<cplx> computed;
    for (const auto& root : r.roots) computed.push_back(root.z);
    double worst = 0.0;
    json pairs = json::array();
    if (computed.size() == exact.size()) {
      for (std::size_t i = 0; i < exact.size(); ++i) {
        const double d = std::abs(exact[i] - computed[i]);
        worst = std::max(worst, d);
        pairs.push_back({{"closed_form", complex_json(exact[i])},
                         {"computed", complex_json(computed[i])},
                         {"abs_error", d}});
      }
    }
    json doc = document("oracle", h);
    doc["closed_form_count"] = static_cast<int>(exact.size());
    doc["computed_count"] = static_cast<int>(computed.size());
    doc["pairs"] = pairs;
    doc["max_abs_error"] = worst;
    add(out, "oracle_h" + h_tag(h) + ".json", doc);
    const bool ok = computed.size() == exact.size() && worst <= 1e-8;
    out.summary["max_abs_error"] = worst;
    out.validations.push_back({"oracle_roots_match", h, ok,
                               std::to_string(computed.size()) + " computed, " +
                                   std::to_string(exact.size()) + " closed form, max |dz| " +
                                   fmt(worst)});
  }

  json aggregate(const std::vector<Outcome>& outcomes, std::vector<Validation>& validations) const {
    if (command_ != Command::Compare) return json::object();
    std::vector<double> errors;
    for (const auto& o : outcomes)
      if (o.summary.contains("max_normalized") && o.summary.at("pairs").get<int>() > 0)
        errors.push_back(o.summary.at("max_normalized").get<double>());
    if (errors.size() < 2) return json::object();
    const auto [lo, hi] = std::minmax_element(errors.begin(), errors.end());
    const double spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
    validations.push_back({"normalized_error_within_factor_3", std::nullopt, spread <= 3.0,
                           "max/min of max_normalized across h = " + fmt(spread)});
    return json{{"max_normalized_spread", std::isfinite(spread) ? json(spread) : json(nullptr)}};
  }

  Command command_;
  const RunConfig& config_;
  OutputSink sink_;
  std::optional<Asymptotics> asym_;
  std::string asym_error_;
  std::optional<GapReport> gap_;
  double well_ = 0.0;
};

}  // namespace

std::optional<Command> command_from_string(std::string_view name) {
  if (name == "predict") return Command::Predict;
  if (name == "compute") return Command::Compute;
  if (name == "compare") return Command::Compare;
  if (name == "count") return Command::Count;
  if (name == "gap") return Command::Gap;
  if (name == "oracle") return Command::Oracle;
  return std::nullopt;
}

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Predict: return "predict";
    case Command::Compute: return "compute";
    case Command::Compare: return "compare";
    case Command::Count: return "count";
    case Command::Gap: return "gap";
    default: return "oracle";
  }
}

void apply(RunConfig& config, const Overrides& overrides) {
  if (!overrides.h.empty()) config.h_list = overrides.h;
  if (overrides.M) config.M = overrides.M;
  if (overrides.out) config.output = *overrides.out;
  validate(config);
}

int run(Command command, const RunConfig& config, std::ostream& log) {
  Runner runner(command, config);
  return runner.run(log);
}

}  // namespace resonance::cli
