#pragma once

// Text specs for state families and dispersions, the JSON experiment
// configuration and the run manifest written next to every artifact.
//
//   family:     gaussian:d=1 | sech:alpha=2 | sinc_sech:alpha=0.5
//               | sinc_power:n=2,p_m=1 | box:d=1     (+ optional boost=, scale=)
//   dispersion: relativistic:m=1 | massless | nonrelativistic:m=1

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "causal/error.hpp"
#include "causal/io.hpp"
#include "causal/packets.hpp"
#include "causal/quantify.hpp"

namespace causal::config {

inline constexpr const char* kVersion = "0.1.0";

namespace detail {

struct Spec {
  std::string kind;
  std::map<std::string, std::string> params;
};

inline Spec split_spec(std::string_view text) {
  Spec s;
  const auto colon = text.find(':');
  s.kind = io::detail::trim(text.substr(0, colon));
  if (s.kind.empty()) throw ConfigError("empty spec");
  if (colon == std::string_view::npos) return s;
  for (auto item : io::detail::split(text.substr(colon + 1))) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("spec parameter without '=': " + std::string(item));
    const auto key = io::detail::trim(item.substr(0, eq));
    if (!s.params.emplace(key, io::detail::trim(item.substr(eq + 1))).second)
      throw ConfigError("repeated spec parameter: " + key);
  }
  return s;
}

class ParamReader {
 public:
  explicit ParamReader(Spec s) : s_(std::move(s)) {}

  double number(const std::string& key, double fallback) {
    auto it = s_.params.find(key);
    if (it == s_.params.end()) return fallback;
    const double v = io::parse_double(it->second);
    s_.params.erase(it);
    return v;
  }

  int integer(const std::string& key, int fallback) {
    const double v = number(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e6) throw ConfigError(key + " must be an integer");
    return static_cast<int>(v);
  }

  void finish() const {
    if (!s_.params.empty())
      throw ConfigError("unknown parameter '" + s_.params.begin()->first + "' for " + s_.kind);
  }

 private:
  Spec s_;
};

}  // namespace detail

inline StateFamily parse_family(std::string_view text) {
  auto spec = detail::split_spec(text);
  const std::string kind = spec.kind;
  detail::ParamReader r(std::move(spec));
  StateFamily f;
  if (kind == "gaussian") f.profile = Gaussian{r.number("d", 1.0)};
  else if (kind == "sech") f.profile = Sech{r.number("alpha", 1.0)};
  else if (kind == "sinc_sech") f.profile = SincSech{r.number("alpha", 0.0)};
  else if (kind == "sinc_power") {
    const int n = r.integer("n", 1);
    f.profile = SincPower{n, r.number("p_m", 1.0)};
  } else if (kind == "box") f.profile = Box{r.number("d", 1.0)};
  else throw ConfigError("unknown family '" + kind + "'");
  f.boost = r.number("boost", 0.0);
  f.scale = r.number("scale", 1.0);
  r.finish();
  f.validate();
  return f;
}

inline Dispersion parse_dispersion(std::string_view text) {
  auto spec = detail::split_spec(text);
  const std::string kind = spec.kind;
  detail::ParamReader r(std::move(spec));
  Dispersion d;
  if (kind == "relativistic") d = Dispersion::relativistic(r.number("m", 1.0));
  else if (kind == "nonrelativistic") d = Dispersion::nonrelativistic(r.number("m", 1.0));
  else if (kind == "massless") d = Dispersion::massless();
  else throw ConfigError("unknown dispersion '" + kind + "'");
  r.finish();
  return d;
}

/// Comma-separated numbers, e.g. "0,0.5,1".
inline std::vector<double> parse_list(std::string_view text) {
  std::vector<double> v;
  for (auto item : io::detail::split(text)) v.push_back(io::parse_double(item));
  return v;
}

// ------------------------------------------------------------ experiment

struct ExperimentConfig {
  std::string family = "gaussian:d=1";
  std::string dispersion = "relativistic:m=1";
  std::optional<GridSpec> grid;
  double t_min = 0.0;
  std::optional<double> t_max;  // default horizon 3/m when absent
  double t_step = 0.01;
  quantify::ScanSpec scan;
  double epsilon_m = 1e-11;
  std::optional<double> tail_budget;
  std::size_t workers = 0;
  std::string output;

  StateFamily state_family() const { return parse_family(family); }
  Dispersion dispersion_relation() const { return parse_dispersion(dispersion); }

  void validate() const {
    (void)state_family();
    (void)dispersion_relation();
    if (grid) grid->validate();
    causal::detail::require(t_min >= 0.0 && t_step > 0.0, "config: need t_min >= 0 and t_step > 0");
    causal::detail::require(!t_max || *t_max >= t_min, "config: t_max < t_min");
    (void)quantify::a_grid(scan);
    causal::detail::require(scan.rel_tol > 0.0 && scan.rel_tol < 1.0, "config: rel_tol must be in (0, 1)");
    causal::detail::require(epsilon_m > 0.0, "config: epsilon_m must be positive");
    causal::detail::require(!tail_budget || *tail_budget > 0.0, "config: tail_budget must be positive");
  }

  quantify::SweepSpec sweep_spec() const {
    validate();
    quantify::SweepSpec s;
    s.t_min = t_min;
    s.t_max = t_max.value_or(std::numeric_limits<double>::quiet_NaN());
    s.t_step = t_step;
    s.scan = scan;
    s.floor.epsilon_M = epsilon_m;
    s.workers = workers;
    s.pipeline.grid = grid;
    if (tail_budget) {
      Budget b = default_budget(state_family(), dispersion_relation());
      b.tail = *tail_budget;
      if (!state_family().compact_support()) b.momentum = *tail_budget;
      s.pipeline.budget = b;
    }
    return s;
  }

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    auto same_scan = [](const quantify::ScanSpec& x, const quantify::ScanSpec& y) {
      return x.a_min == y.a_min && x.a_max == y.a_max && x.per_decade == y.per_decade &&
             x.rel_tol == y.rel_tol && x.mode == y.mode;
    };
    return a.family == b.family && a.dispersion == b.dispersion && a.grid == b.grid && a.t_min == b.t_min &&
           a.t_max == b.t_max && a.t_step == b.t_step && same_scan(a.scan, b.scan) &&
           a.epsilon_m == b.epsilon_m && a.tail_budget == b.tail_budget && a.workers == b.workers &&
           a.output == b.output;
  }
};

inline const char* mode_name(quantify::IntervalMode m) {
  switch (m) {
    case quantify::IntervalMode::Symmetric: return "symmetric";
    case quantify::IntervalMode::Asymmetric: return "asymmetric";
    default: return "auto";
  }
}

inline quantify::IntervalMode parse_mode(const std::string& s) {
  if (s == "auto") return quantify::IntervalMode::Automatic;
  if (s == "symmetric") return quantify::IntervalMode::Symmetric;
  if (s == "asymmetric") return quantify::IntervalMode::Asymmetric;
  throw ConfigError("unknown interval mode '" + s + "'");
}

inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
  nlohmann::ordered_json j;
  j["family"] = c.family;
  j["dispersion"] = c.dispersion;
  j["grid"] = c.grid ? nlohmann::ordered_json{{"n", c.grid->n}, {"length", c.grid->length}}
                     : nlohmann::ordered_json(nullptr);
  j["t_min"] = c.t_min;
  j["t_max"] = c.t_max ? nlohmann::ordered_json(*c.t_max) : nlohmann::ordered_json(nullptr);
  j["t_step"] = c.t_step;
  j["scan"] = {{"a_min", c.scan.a_min},
               {"a_max", c.scan.a_max},
               {"per_decade", c.scan.per_decade},
               {"rel_tol", c.scan.rel_tol},
               {"mode", mode_name(c.scan.mode)}};
  j["epsilon_m"] = c.epsilon_m;
  j["tail_budget"] = c.tail_budget ? nlohmann::ordered_json(*c.tail_budget) : nlohmann::ordered_json(nullptr);
  j["workers"] = c.workers;
  j["output"] = c.output;
  return j;
}

/// Strict parse: unknown keys are errors, absent keys keep their defaults.
inline ExperimentConfig from_json(const nlohmann::json& j) {
  static const std::vector<std::string> kKeys = {"family", "t_min", "t_max", "t_step", "scan", "epsilon_m",
                                                 "tail_budget", "workers", "output", "dispersion", "grid"};
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(kKeys.begin(), kKeys.end(), it.key()) == kKeys.end())
      throw ConfigError("config: unknown key '" + it.key() + "'");
  ExperimentConfig c;
  try {
    if (j.contains("family")) c.family = j["family"].get<std::string>();
    if (j.contains("dispersion")) c.dispersion = j["dispersion"].get<std::string>();
    if (j.contains("grid") && !j["grid"].is_null())
      c.grid = GridSpec{j["grid"].at("n").get<std::size_t>(), j["grid"].at("length").get<double>()};
    if (j.contains("t_min")) c.t_min = j["t_min"].get<double>();
    if (j.contains("t_max") && !j["t_max"].is_null()) c.t_max = j["t_max"].get<double>();
    if (j.contains("t_step")) c.t_step = j["t_step"].get<double>();
    if (j.contains("scan")) {
      const auto& s = j["scan"];
      for (auto it = s.begin(); it != s.end(); ++it) {
        const auto& k = it.key();
        if (k == "a_min") c.scan.a_min = it->get<double>();
        else if (k == "a_max") c.scan.a_max = it->get<double>();
        else if (k == "per_decade") c.scan.per_decade = it->get<int>();
        else if (k == "rel_tol") c.scan.rel_tol = it->get<double>();
        else if (k == "mode") c.scan.mode = parse_mode(it->get<std::string>());
        else throw ConfigError("config: unknown scan key '" + k + "'");
      }
    }
    if (j.contains("epsilon_m")) c.epsilon_m = j["epsilon_m"].get<double>();
    if (j.contains("tail_budget") && !j["tail_budget"].is_null()) c.tail_budget = j["tail_budget"].get<double>();
    if (j.contains("workers")) c.workers = j["workers"].get<std::size_t>();
    if (j.contains("output")) c.output = j["output"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// -------------------------------------------------------------- manifest

inline std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::string version = kVersion;
  std::optional<GridSpec> grid;
  quantify::GridDiagnostics diagnostics;
  double wall_time_s = 0.0;
  std::vector<std::string> artifacts;
  nlohmann::ordered_json config;
};

inline RunManifest make_manifest(std::string command, const nlohmann::ordered_json& config) {
  RunManifest m;
  m.command = std::move(command);
  m.config = config;
  m.config_hash = fnv1a_hex(config.dump());
  return m;
}

inline nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["version"] = m.version;
  j["config_hash"] = m.config_hash;
  j["config"] = m.config;
  j["grid"] = m.grid ? nlohmann::ordered_json{{"n", m.grid->n}, {"length", m.grid->length}, {"dx", m.grid->dx()}}
                     : nlohmann::ordered_json(nullptr);
  j["diagnostics"] = {{"max_renormalization", m.diagnostics.max_renormalization},
                      {"max_edge_mass", m.diagnostics.max_edge_mass},
                      {"spectral_edge_mass", m.diagnostics.spectral_edge_mass}};
  j["wall_time_s"] = m.wall_time_s;
  j["artifacts"] = m.artifacts;
  return j;
}

/// Writes <artifact>.manifest.json beside the first artifact.
inline std::filesystem::path write_manifest(const RunManifest& m, std::filesystem::path path) {
  io::detail::open_out(path) << to_json(m).dump(2) << '\n';
  return path;
}

inline std::filesystem::path manifest_path(const std::filesystem::path& artifact) {
  auto p = artifact;
  p += ".manifest.json";
  return p;
}

}  // namespace causal::config
