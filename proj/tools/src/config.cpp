#include "resonance/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance::cli {
namespace {

class Parser {
 public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    if (node.IsDefined() && !node.Mark().is_null())
      os << ':' << node.Mark().line + 1 << ':' << node.Mark().column + 1;
    os << ": " << msg;
    throw ConfigError(os.str());
  }

  void allow_keys(const YAML::Node& map, std::initializer_list<const char*> keys) const {
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& kv : map) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "'");
    }
  }

  YAML::Node require(const YAML::Node& map, const char* key) const {
    const YAML::Node node = map[key];
    if (!node) fail(map, std::string("missing key '") + key + "'");
    return node;
  }

  double real(const YAML::Node& node, const char* what) const {
    if (!node.IsScalar()) fail(node, std::string(what) + " must be a number");
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, std::string(what) + " must be a number, got '" + node.Scalar() + "'");
    }
  }

  int integer(const YAML::Node& node, const char* what) const {
    if (!node.IsScalar()) fail(node, std::string(what) + " must be an integer");
    try {
      return node.as<int>();
    } catch (const YAML::Exception&) {
      fail(node, std::string(what) + " must be an integer, got '" + node.Scalar() + "'");
    }
  }

  double real_or(const YAML::Node& map, const char* key, double fallback) const {
    const YAML::Node node = map[key];
    return node ? real(node, key) : fallback;
  }

  std::vector<double> reals(const YAML::Node& node, const char* what) const {
    if (node.IsScalar()) return {real(node, what)};
    if (!node.IsSequence()) fail(node, std::string(what) + " must be a number or a list");
    std::vector<double> out;
    for (const auto& item : node) out.push_back(real(item, what));
    return out;
  }

  Term term(const YAML::Node& node) const {
    if (!node.IsMap()) fail(node, "a term must be a table with a 'kind'");
    const auto kind = require(node, "kind").as<std::string>();
    if (kind == "polynomial") {
      allow_keys(node, {"kind", "coefficients", "subinterval"});
      Polynomial p{reals(require(node, "coefficients"), "coefficients")};
      if (p.coefficients.empty()) fail(node, "polynomial needs at least one coefficient");
      return p;
    }
    if (kind == "constant") {
      allow_keys(node, {"kind", "value", "subinterval"});
      return Polynomial{{real(require(node, "value"), "value")}};
    }
    if (kind == "sine") {
      allow_keys(node, {"kind", "amplitude", "frequency", "phase", "subinterval"});
      return Sine{real_or(node, "amplitude", 1.0), real_or(node, "frequency", 1.0),
                  real_or(node, "phase", 0.0)};
    }
    if (kind == "exponential") {
      allow_keys(node, {"kind", "amplitude", "rate", "subinterval"});
      return Exponential{real_or(node, "amplitude", 1.0), real_or(node, "rate", 1.0)};
    }
    if (kind == "gaussian") {
      allow_keys(node, {"kind", "amplitude", "center", "width", "subinterval"});
      const double width = real_or(node, "width", 1.0);
      if (!(width > 0.0)) fail(node["width"], "gaussian width must be positive");
      return GaussianBump{real_or(node, "amplitude", 1.0), real_or(node, "center", 0.0), width};
    }
    fail(node["kind"], "unknown term kind '" + kind +
                           "' (expected polynomial, constant, sine, exponential or gaussian)");
  }

  Potential potential(const YAML::Node& node) const {
    if (!node.IsMap()) fail(node, "potential must be a table");
    allow_keys(node, {"support_right", "pieces", "declared_orders"});
    const double L = real(require(node, "support_right"), "support_right");
    if (!(L > 0.0)) fail(node["support_right"], "support_right must be positive");

    const YAML::Node pieces_node = require(node, "pieces");
    if (!pieces_node.IsSequence() || pieces_node.size() == 0)
      fail(pieces_node, "pieces must be a non-empty list");
    std::vector<Piece> pieces;
    for (const auto& pn : pieces_node) {
      if (!pn.IsMap()) fail(pn, "a piece must be a table");
      Piece piece;
      if (const YAML::Node sub = pn["subinterval"]) {
        const auto ends = reals(sub, "subinterval");
        if (ends.size() != 2 || !(ends[1] > ends[0]))
          fail(sub, "subinterval must be [left, right] with right > left");
        piece.left = ends[0];
        piece.right = ends[1];
      } else if (pieces_node.size() == 1) {
        piece.left = 0.0;
        piece.right = L;
      } else {
        fail(pn, "subinterval is required when there is more than one piece");
      }
      if (const YAML::Node terms = pn["terms"]) {
        allow_keys(pn, {"subinterval", "terms"});
        if (!terms.IsSequence() || terms.size() == 0) fail(terms, "terms must be a non-empty list");
        for (const auto& t : terms) piece.terms.push_back(term(t));
      } else {
        piece.terms.push_back(term(pn));
      }
      pieces.push_back(std::move(piece));
    }

    std::map<double, int> declared;
    if (const YAML::Node orders = node["declared_orders"]) {
      if (orders.IsMap()) {
        for (const auto& kv : orders)
          declared[real(kv.first, "interface position")] = integer(kv.second, "order");
      } else if (orders.IsSequence()) {
        for (const auto& item : orders) {
          if (!item.IsMap()) fail(item, "declared_orders entries need 'at' and 'order'");
          allow_keys(item, {"at", "order"});
          declared[real(require(item, "at"), "at")] = integer(require(item, "order"), "order");
        }
      } else {
        fail(orders, "declared_orders must be a table or a list");
      }
      for (const auto& [at, order] : declared)
        if (order < 0) fail(orders, "declared orders must be non-negative");
    }

    try {
      return Potential(L, std::move(pieces), std::move(declared));
    } catch (const resonance::Error& e) {
      fail(node, std::string("invalid potential: ") + e.what());
    }
  }

  RunConfig run(const std::string& text) const {
    YAML::Node root;
    try {
      root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
      std::ostringstream os;
      os << source_ << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
      throw ConfigError(os.str());
    }
    if (!root.IsMap()) fail(root, "config must be a table");
    allow_keys(root, {"potential", "window", "h", "M", "tier", "tolerances", "output",
                      "deterministic"});

    RunConfig config;
    config.potential = potential(require(root, "potential"));
    config.text = text;

    const YAML::Node window = require(root, "window");
    std::vector<double> ab;
    if (window.IsMap()) {
      allow_keys(window, {"a", "b"});
      ab = {real(require(window, "a"), "a"), real(require(window, "b"), "b")};
    } else {
      ab = reals(window, "window");
    }
    if (ab.size() != 2) fail(window, "window must be [a, b]");
    config.window = {ab[0], ab[1]};

    const YAML::Node h = require(root, "h");
    config.h_list = reals(h, "h");

    if (const YAML::Node m = root["M"]) config.M = real(m, "M");
    if (const YAML::Node t = root["tier"]) {
      const auto tier = tier_from_string(t.as<std::string>());
      if (!tier) fail(t, "tier must be closed_form or qc_newton");
      config.tier = *tier;
    }
    if (const YAML::Node tol = root["tolerances"]) {
      if (!tol.IsMap()) fail(tol, "tolerances must be a table");
      allow_keys(tol, {"shoot", "residual", "flow"});
      config.tolerances.shoot = real_or(tol, "shoot", config.tolerances.shoot);
      config.tolerances.residual = real_or(tol, "residual", config.tolerances.residual);
      config.tolerances.flow = real_or(tol, "flow", config.tolerances.flow);
    }
    if (const YAML::Node out = root["output"]) config.output = out.as<std::string>();
    if (const YAML::Node det = root["deterministic"]) {
      try {
        config.deterministic = det.as<bool>();
      } catch (const YAML::Exception&) {
        fail(det, "deterministic must be true or false");
      }
    }

    try {
      validate(config);
    } catch (const ConfigError& e) {
      // Attach the line of the offending section.
      const std::string msg = e.what();
      if (msg.rfind("window", 0) == 0) fail(window, msg);
      if (msg.rfind("h", 0) == 0) fail(h, msg);
      if (msg.rfind("M", 0) == 0) fail(root["M"], msg);
      if (msg.rfind("tolerances", 0) == 0) fail(root["tolerances"], msg);
      fail(root, msg);
    }
    return config;
  }

 private:
  std::string source_;
};

}  // namespace

void validate(RunConfig& config) {
  const double a = config.window.lo, b = config.window.hi;
  const double sup = sup_V(config.potential);
  if (!(b > a)) throw ConfigError("window [a, b] needs b > a");
  if (!(a > sup)) {
    std::ostringstream os;
    os << std::setprecision(12) << "window: a = " << a << " must exceed sup V = " << sup;
    throw ConfigError(os.str());
  }
  if (!(a > 0.0)) throw ConfigError("window: a must be positive");

  if (config.h_list.empty()) throw ConfigError("h list is empty");
  for (double h : config.h_list)
    if (!(h > 0.0 && h < 1.0)) throw ConfigError("h values must lie in (0, 1)");
  std::sort(config.h_list.begin(), config.h_list.end(), std::greater<>());
  if (std::adjacent_find(config.h_list.begin(), config.h_list.end()) != config.h_list.end())
    throw ConfigError("h list contains duplicates");

  if (config.M && !(*config.M > 0.0)) throw ConfigError("M must be positive");
  const auto& t = config.tolerances;
  if (!(t.shoot > 0.0 && t.residual > 0.0 && t.flow > 0.0))
    throw ConfigError("tolerances must all be positive");
}

RunConfig parse_config(const std::string& text, const std::string& source_name) {
  return Parser(source_name).run(text);
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  RunConfig config = parse_config(buffer.str(), path.string());
  config.source = path;
  return config;
}

std::string config_hash(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << hash;
  return os.str();
}

}  // namespace resonance::cli
