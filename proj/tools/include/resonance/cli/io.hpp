#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "resonance/asymptotic.hpp"
#include "resonance/dynamics.hpp"
#include "resonance/rootfind.hpp"

namespace resonance {

// nlohmann ADL hooks for the core records.
void to_json(nlohmann::json& j, const ResonancePrediction& p);
void from_json(const nlohmann::json& j, ResonancePrediction& p);
void to_json(nlohmann::json& j, const Rect& r);
void from_json(const nlohmann::json& j, Rect& r);
void to_json(nlohmann::json& j, const ComputedResonance& c);
void from_json(const nlohmann::json& j, ComputedResonance& c);
void to_json(nlohmann::json& j, const MatchPair& m);
void to_json(nlohmann::json& j, const MatchTable& t);
void to_json(nlohmann::json& j, const GapSample& s);
void to_json(nlohmann::json& j, const GapReport& r);

}  // namespace resonance

namespace resonance::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

nlohmann::json complex_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);

/// "0.02" style tag used in per-h file names.
std::string h_tag(double h);

/// Serializes writes per output path; safe to share between per-h workers.
class OutputSink {
 public:
  explicit OutputSink(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& directory() const noexcept { return dir_; }

  /// Writes pretty JSON and returns the path. The document is re-read and
  /// compared with the in-memory value; throws std::runtime_error on a
  /// round-trip mismatch.
  std::filesystem::path write_json(const std::string& name, const nlohmann::json& doc);
  std::filesystem::path write_text(const std::string& name, const std::string& text);

 private:
  std::mutex& lock_for(const std::filesystem::path& path);

  std::filesystem::path dir_;
  std::mutex table_mutex_;
  std::map<std::filesystem::path, std::mutex> locks_;
};

/// Header n,h,re_z,im_z,energy,tier plus im_z_over_hlog.
std::string predictions_csv(const std::vector<ResonancePrediction>& predictions);
/// Header n,h,re_z,im_z,im_z_over_hlog,residual_norm,newton_iters.
std::string computed_csv(const std::vector<ComputedResonance>& roots, double h);

}  // namespace resonance::cli
