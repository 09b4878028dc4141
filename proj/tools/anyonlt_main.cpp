// Command-line entry point: parses flags and the optional JSON config, runs a
// suite and writes report.json, timings.json and the suite's tables and plots.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "anyonlt/report.hpp"
#include "anyonlt/suites.hpp"

namespace {

namespace fs = std::filesystem;
using anyonlt::report::ConfigError;
using anyonlt::report::RunConfig;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw anyonlt::InvalidInput("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw anyonlt::Error("cannot write " + path.string());
  out << text;
}

struct Flags {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> parallel;
  std::vector<std::string> tolerances;

  std::optional<double> nu, bessel_gamma;
  std::optional<double> alpha, ta_gamma;
  std::optional<int> n_side;
  std::optional<std::string> mode, flux_weight;
  std::optional<std::string> density;
  std::optional<double> cov_lower, cov_upper;
  std::optional<double> c_alpha, c_gamma, n_lower, n_upper;
  std::optional<std::string> ledger_path;
};

template <typename T>
void override_with(const std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

template <typename T>
void override_with(const std::optional<T>& flag, std::optional<T>& target) {
  if (flag) target = *flag;
}

RunConfig build_config(const Flags& f, const std::string& suite) {
  RunConfig c;
  if (!f.config_path.empty()) c = anyonlt::report::parse_config(read_file(f.config_path));
  c.suite = suite;
  override_with(f.out, c.out);
  if (const char* env = std::getenv("ANYONLT_OUT"); env && *env) c.out = env;
  override_with(f.seed, c.seed);
  override_with(f.parallel, c.parallel);
  if (c.parallel < 1) throw ConfigError("--parallel must be at least 1", 0, 0);
  for (const auto& t : f.tolerances) {
    const auto eq = t.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--tol expects name=value, got '" + t + "'", 0, 0);
    try {
      std::size_t used = 0;
      const double v = std::stod(t.substr(eq + 1), &used);
      if (used != t.size() - eq - 1) throw std::invalid_argument("trailing characters");
      c.tolerances[t.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw ConfigError("--tol value is not a number: '" + t + "'", 0, 0);
    }
  }
  override_with(f.nu, c.bessel.nu);
  override_with(f.bessel_gamma, c.bessel.gamma);
  override_with(f.alpha, c.two_anyon.alpha);
  override_with(f.ta_gamma, c.two_anyon.gamma);
  override_with(f.n_side, c.two_anyon.n_side);
  override_with(f.mode, c.two_anyon.mode);
  override_with(f.flux_weight, c.two_anyon.flux_weight);
  override_with(f.density, c.covering.density);
  override_with(f.cov_lower, c.covering.n_lower);
  override_with(f.cov_upper, c.covering.n_upper);
  override_with(f.c_alpha, c.constants.alpha);
  override_with(f.c_gamma, c.constants.gamma);
  override_with(f.n_lower, c.constants.n_lower);
  override_with(f.n_upper, c.constants.n_upper);
  if (f.ledger_path) {
    const std::string text = read_file(*f.ledger_path);
    try {
      c.constants.ledger = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      int line = 1, column = 1;
      for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
          ++line;
          column = 1;
        } else {
          ++column;
        }
      }
      throw ConfigError(std::string("malformed ledger JSON: ") + e.what(), line, column);
    }
  }
  // Re-validate the merged configuration through the strict reader.
  return anyonlt::report::config_from_json(anyonlt::report::to_json(c));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification toolkit for extended anyons"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config_path, "RunConfig JSON file")->check(CLI::ExistingFile);
  app.add_option("--out", f.out, "output directory (ANYONLT_OUT overrides)");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--parallel", f.parallel, "worker threads for independent cases");
  app.add_option("--tol", f.tolerances, "tolerance override name=value")->take_all();

  auto* bessel = app.add_subcommand("verify-bessel", "radial eigenvalue checks and sweep");
  bessel->add_option("--nu", f.nu, "angular parameter");
  bessel->add_option("--gamma", f.bessel_gamma, "inner radius ratio");

  app.add_subcommand("verify-diamagnetic", "magnetic Neumann Laplacian checks");

  auto* two = app.add_subcommand("two-anyon", "two-anyon ground energy");
  two->add_option("--alpha", f.alpha, "statistics parameter");
  two->add_option("--gamma", f.ta_gamma, "flux radius over side");
  two->add_option("--n-side", f.n_side, "nodes per direction");
  two->add_option("--mode", f.mode, "kinetic-only or full");
  two->add_option("--flux-weight", f.flux_weight, "unit or alpha");

  auto* cov = app.add_subcommand("covering", "mass-calibrated covering checks");
  cov->add_option("--density", f.density, "uniform, gaussian, two-bump or a CSV file of x,y,value rows");
  cov->add_option("--n-lower", f.cov_lower, "lower mass window");
  cov->add_option("--n-upper", f.cov_upper, "upper mass window");

  auto* cons = app.add_subcommand("constants", "constant ledger");
  cons->add_option("--alpha", f.c_alpha, "statistics parameter");
  cons->add_option("--gamma", f.c_gamma, "flux radius over box side");
  cons->add_option("--n-lower", f.n_lower, "lower mass window");
  cons->add_option("--n-upper", f.n_upper, "upper mass window");
  cons->add_option("--ledger", f.ledger_path, "JSON file of entry overrides (number or null)")->check(CLI::ExistingFile);

  app.add_subcommand("all", "all acceptance checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig config;
  try {
    config = build_config(f, app.get_subcommands().front()->get_name());
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (e.line() > 0) std::cerr << " at line " << e.line() << ", column " << e.column();
    std::cerr << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    const auto result = anyonlt::suites::run_suite(config);
    const fs::path out(config.out);
    fs::create_directories(out);
    write_file(out / "report.json", result.report.to_json().dump(2) + "\n");
    write_file(out / "timings.json", result.report.timings_json().dump(2) + "\n");
    for (const auto& [name, text] : result.files) write_file(out / name, text);
    for (const auto& c : result.report.checks)
      std::cout << anyonlt::report::to_string(c.status) << ' ' << c.name << '\n';
    std::cout << "report: " << (out / "report.json").string() << '\n';
    return result.report.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
