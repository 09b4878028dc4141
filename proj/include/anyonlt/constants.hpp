#pragma once

// Explicit constants of the exclusion and Lieb-Thirring chain, and a ledger
// that tracks where every number comes from.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace anyonlt::constants {

/// binom(n, 2) (3/4)^(n-2).
double c_n(int n);

/// pi^2 C_n (1-eps) E2 / (pi^2 + E2 [C_n (1-eps) + 16 (1/eps - 1)]).
double reduction_to_two(int n, double e2_value, double epsilon);

/// Constants of the simplified form C_n E2 / (C1 + C2 C_n) obtained at
/// eps = 1/2 with the trial-state bound E2 <= 8.
inline constexpr double kReductionC1 = 2.0 + 256.0 / (3.14159265358979323846 * 3.14159265358979323846);
inline constexpr double kReductionC2 = 8.0 / (3.14159265358979323846 * 3.14159265358979323846);

/// Modified Bessel functions of the first kind by power series.
double bessel_i0(double x);
double bessel_i1(double x);

struct KAlpha {
  double value = 2.0;
  bool is_limit = false;  // alpha = 0: the x -> 0 limit of x I0(x)/I1(x)
};
/// sqrt(2 alpha) I0(sqrt(2 alpha)) / I1(sqrt(2 alpha)).
KAlpha k_alpha(double alpha);

/// Medium-box lower bound per unit square. For gamma < sqrt(2):
/// alpha min{(1 - gamma^2/2)^-1, K/2} / (K + 2 alpha (-ln(gamma/sqrt 2))) (n-1)_+;
/// for gamma >= sqrt(2): 2 alpha gamma^-2 n (n-1)_+.
double medium_box_bound(double alpha, double gamma, int n);

struct FiniteNStep {
  std::int64_t particles = 0;  // 4^l
  double lower_bound = 0.0;    // 4^(l-k) min(base)
};

struct FiniteNResult {
  double value = 0.0;  // 4^-k N min(base)
  int k = 0;
  double base_min = 0.0;
  std::vector<FiniteNStep> trace;
};

/// Finite-N reduction from base energies E(n), 4^(k-1)+1 <= n <= 4^k.
/// Throws PreconditionViolated if any base value is <= 0.
FiniteNResult finite_n_reduction(const std::map<int, double>& base_values, std::int64_t particles);

enum class Regime { large, medium, small };

struct BoxRegime {
  double gamma = 0.0;
  Regime regime = Regime::large;
  double c1 = 1.0 / 24.0;
  double c2 = 2.0;
};

/// large iff gamma < c1, medium iff c1 <= gamma <= c2, small iff gamma > c2.
BoxRegime classify(double gamma, double c1 = 1.0 / 24.0, double c2 = 2.0);
std::string to_string(Regime regime);

/// Corridor area L^2 - (L - 4R)^2 for integer L, R with 4R <= L.
std::int64_t corridor_area(std::int64_t side, std::int64_t radius);

enum class Provenance { exact_formula, measured, abstract_parameter };
std::string to_string(Provenance p);

struct LedgerEntry {
  std::optional<double> value;     // absent: symbolic only
  Provenance provenance = Provenance::exact_formula;
  std::string formula;             // how the value is obtained
  std::vector<std::string> depends_on;
  std::string symbolic;            // expression used when the value is absent
  std::vector<std::string> assumes;  // abstract parameters with configured values upstream
};

/// Named constants with provenance. An abstract entry without a value
/// poisons every entry computed from it: those keep only a symbolic form.
class ConstantLedger {
 public:
  void set(const std::string& name, LedgerEntry entry);
  void set_value(const std::string& name, double value, Provenance provenance, const std::string& formula);
  void set_abstract(const std::string& name, const std::string& formula, std::optional<double> configured = {});

  bool contains(const std::string& name) const { return entries_.count(name) > 0; }
  /// Throws LedgerIncomplete if the entry is missing.
  const LedgerEntry& at(const std::string& name) const;
  const std::map<std::string, LedgerEntry>& entries() const noexcept { return entries_; }

  /// Entry derived from `inputs`: numeric when all inputs carry values,
  /// otherwise symbolic. Abstract upstream parameters are collected in `assumes`.
  void derive(const std::string& name, const std::vector<std::string>& inputs, const std::string& formula,
              const std::string& symbolic, const std::function<double()>& compute);

  nlohmann::json to_json() const;
  /// Dependency graph in DOT, edges from input to derived entry.
  std::string to_dot() const;

 private:
  std::map<std::string, LedgerEntry> entries_;
};

/// Adds epsilon, C_FN and C_EA from C_LE, C_2, N_lower, N_upper, b_2 and alpha.
/// Throws LedgerIncomplete for a missing input and PreconditionViolated if
/// epsilon >= 1.
ConstantLedger assemble_global(const ConstantLedger& ledger);

struct ChainInputs {
  double alpha = 0.5;
  double gamma = 1e-3;
  double n_lower = 5.0;
  double n_upper = 10.0;
  double c1 = 1.0 / 24.0;
  double c2 = 2.0;
  double c_inner = 1.0;
  int n_bar = 16;  // 4^k
  int bs_power = 2;
  double bs_shift = 0.5;
  std::optional<double> universal_c2;  // Sobolev constant; abstract when absent
  std::optional<double> overlap_b2;    // measured overlap; abstract when absent
  std::optional<int> small_box_count;  // measured sup_A N(2, A); bound used when absent
};

/// Full chain for the given box: regime, box-level constant C_LE by the
/// regime's bound, then the global assembly.
ConstantLedger build_chain(const ChainInputs& inputs);

}  // namespace anyonlt::constants
