#pragma once

// Run configuration (strict JSON) and machine-readable suite reports.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anyonlt/error.hpp"

namespace anyonlt::report {

inline constexpr const char* kVersion = "1.0.0";

/// Malformed configuration text; line and column are 1-based.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line, int column)
      : Error(what), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_, column_;
};

struct BesselConfig {
  std::optional<double> nu;     // single case; the sweep when absent
  std::optional<double> gamma;
  int grid_points = 4096;
};

struct MagneticConfig {
  int n_side = 65;
  int spectrum_n_side = 129;
  int fields = 20;
  int sources = 5;
  double amplitude = 50.0;
  double e = 1.0;
  double lambda = 2.0;
  double bs_shift = 0.5;
  int bs_power = 2;
};

struct TwoAnyonConfig {
  std::optional<double> alpha;  // single solve; the acceptance checks when absent
  double gamma = 1e-3;
  int n_side = 20;
  std::string mode = "kinetic-only";  // or "full"
  std::string flux_weight = "unit";   // or "alpha"
  std::vector<double> alphas{0.2, 0.5, 0.8, 1.2, 1.5, 1.8};
  double scaling_alpha = 0.5;
  int trial_nodes = 64;
};

struct CoveringConfig {
  int seeds = 10;
  double spacing = 1.0 / 64.0;
  double total_mass = 200.0;
  double n_lower = 5.0;
  double n_upper = 10.0;
  std::optional<std::string> density;  // uniform | gaussian | two-bump | CSV path; acceptance check when absent
};

struct ConstantsConfig {
  double alpha = 0.5;
  double gamma = 1e-3;
  double n_lower = 5.0;
  double n_upper = 10.0;
  double c1 = 1.0 / 24.0;
  double c2 = 2.0;
  double c_inner = 1.0;
  int n_bar = 16;
  std::optional<double> universal_c2;
  std::optional<double> overlap_b2;
  nlohmann::json ledger = nlohmann::json::object();  // per-entry value overrides
};

struct RunConfig {
  std::string suite = "all";
  std::uint64_t seed = 7;
  std::string out = "out";
  int parallel = 1;
  std::map<std::string, double> tolerances;
  BesselConfig bessel;
  MagneticConfig magnetic;
  TwoAnyonConfig two_anyon;
  CoveringConfig covering;
  ConstantsConfig constants;

  /// Tolerance override or the given default.
  double tol(const std::string& name, double fallback) const;
};

/// Strict parse: unknown keys and wrong types throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

enum class Status { pass, fail, skipped };
std::string to_string(Status s);

struct Check {
  std::string name;
  Status status = Status::skipped;
  nlohmann::json value;  // measured
  nlohmann::json bound;
  double tolerance = 0.0;
  std::string detail;
  double runtime_seconds = 0.0;  // reported in the timings file only
};

struct Report {
  std::string suite;
  std::vector<Check> checks;
  nlohmann::json config;
  nlohmann::json artifacts = nlohmann::json::object();  // extra measured data

  bool passed() const;  // no check failed
  /// Deterministic JSON: no runtimes, no timestamps.
  nlohmann::json to_json() const;
  nlohmann::json timings_json() const;
};

}  // namespace anyonlt::report
