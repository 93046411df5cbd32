#include "resonance/cli/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace resonance {

using nlohmann::json;

void to_json(json& j, const ResonancePrediction& p) {
  j = json{{"n", p.n},
           {"h", p.h},
           {"energy", p.energy},
           {"w", cli::complex_json(p.w)},
           {"z", cli::complex_json(p.z)},
           {"tier", std::string(to_string(p.tier))},
           {"iterations", p.iterations},
           {"residual", p.residual}};
}

void from_json(const json& j, ResonancePrediction& p) {
  p.n = j.at("n").get<int>();
  p.h = j.at("h").get<double>();
  p.energy = j.at("energy").get<double>();
  p.w = cli::complex_from_json(j.at("w"));
  p.z = cli::complex_from_json(j.at("z"));
  const auto tier = tier_from_string(j.at("tier").get<std::string>());
  if (!tier) throw std::runtime_error("unknown tier in prediction record");
  p.tier = *tier;
  p.iterations = j.at("iterations").get<int>();
  p.residual = j.at("residual").get<double>();
}

void to_json(json& j, const Rect& r) {
  j = json{{"re_lo", r.re_lo}, {"re_hi", r.re_hi}, {"im_lo", r.im_lo}, {"im_hi", r.im_hi}};
}

void from_json(const json& j, Rect& r) {
  r.re_lo = j.at("re_lo").get<double>();
  r.re_hi = j.at("re_hi").get<double>();
  r.im_lo = j.at("im_lo").get<double>();
  r.im_hi = j.at("im_hi").get<double>();
}

void to_json(json& j, const ComputedResonance& c) {
  j = json{{"z", cli::complex_json(c.z)},
           {"residual_norm", c.residual_norm},
           {"winding_cell", c.winding_cell},
           {"newton_iters", c.newton_iters},
           {"paired_index", c.paired_index ? json(*c.paired_index) : json(nullptr)}};
}

void from_json(const json& j, ComputedResonance& c) {
  c.z = cli::complex_from_json(j.at("z"));
  c.residual_norm = j.at("residual_norm").get<double>();
  c.winding_cell = j.at("winding_cell").get<Rect>();
  c.newton_iters = j.at("newton_iters").get<int>();
  const auto& p = j.at("paired_index");
  c.paired_index = p.is_null() ? std::nullopt : std::optional<int>(p.get<int>());
}

void to_json(json& j, const MatchPair& m) {
  j = json{{"n", m.n},
           {"predicted", cli::complex_json(m.predicted)},
           {"computed", cli::complex_json(m.computed)},
           {"abs_error", m.abs_error},
           {"normalized_error", m.normalized_error}};
}

void to_json(json& j, const MatchTable& t) {
  json unmatched_computed = json::array();
  for (cplx z : t.unmatched_computed) unmatched_computed.push_back(cli::complex_json(z));
  j = json{{"h", t.h},
           {"pairs", t.pairs},
           {"unmatched_predicted", t.unmatched_predicted},
           {"unmatched_computed", unmatched_computed},
           {"max_abs", t.max_abs},
           {"median_abs", t.median_abs},
           {"max_normalized", t.max_normalized},
           {"median_normalized", t.median_normalized},
           {"min_predicted_spacing", t.min_predicted_spacing},
           {"unique", t.unique}};
}

void to_json(json& j, const GapSample& s) {
  j = json{{"energy", s.energy}, {"diam", s.diam}, {"period", s.period}, {"band", s.band},
           {"gap", std::isfinite(s.gap) ? json(s.gap) : json(nullptr)}};
}

void to_json(json& j, const GapReport& r) {
  j = json{{"window", {r.window.lo, r.window.hi}},
           {"alpha", r.alpha},
           {"diam", r.diam},
           {"nu0_bound", std::isfinite(r.nu0_bound) ? json(r.nu0_bound) : json(nullptr)},
           {"band_top", r.band_top},
           {"consistent", r.consistent},
           {"samples", r.samples}};
}

}  // namespace resonance

namespace resonance::cli {

using nlohmann::json;

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

cplx complex_from_json(const json& j) {
  return {j.at("re").get<double>(), j.at("im").get<double>()};
}

std::string h_tag(double h) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", h);
  return buf;
}

std::mutex& OutputSink::lock_for(const std::filesystem::path& path) {
  std::lock_guard lock(table_mutex_);
  return locks_[path];
}

std::filesystem::path OutputSink::write_text(const std::string& name, const std::string& text) {
  const auto path = dir_ / name;
  std::lock_guard lock(lock_for(path));
  std::filesystem::create_directories(dir_);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return path;
}

std::filesystem::path OutputSink::write_json(const std::string& name, const json& doc) {
  const auto path = write_text(name, doc.dump(2) + "\n");
  std::lock_guard lock(lock_for(path));
  std::ifstream in(path, std::ios::binary);
  const json back = json::parse(in);
  if (back != doc) throw std::runtime_error("round-trip mismatch in " + path.string());
  return path;
}

namespace {

std::string number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string predictions_csv(const std::vector<ResonancePrediction>& predictions) {
  std::ostringstream os;
  os << "n,h,re_z,im_z,energy,tier,im_z_over_hlog\n";
  for (const auto& p : predictions) {
    os << p.n << ',' << number(p.h) << ',' << number(p.z.real()) << ',' << number(p.z.imag())
       << ',' << number(p.energy) << ',' << to_string(p.tier) << ','
       << number(p.z.imag() / (p.h * std::log(1.0 / p.h))) << '\n';
  }
  return os.str();
}

std::string computed_csv(const std::vector<ComputedResonance>& roots, double h) {
  std::ostringstream os;
  os << "n,h,re_z,im_z,im_z_over_hlog,residual_norm,newton_iters\n";
  for (const auto& r : roots) {
    if (r.paired_index) os << *r.paired_index;
    os << ',' << number(h) << ',' << number(r.z.real()) << ',' << number(r.z.imag()) << ','
       << number(r.z.imag() / (h * std::log(1.0 / h))) << ',' << number(r.residual_norm) << ','
       << r.newton_iters << '\n';
  }
  return os.str();
}

}  // namespace resonance::cli
