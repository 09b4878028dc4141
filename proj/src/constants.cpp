#include "anyonlt/constants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "anyonlt/error.hpp"
#include "anyonlt/magnetic_grid.hpp"
#include "anyonlt/radial.hpp"

namespace anyonlt::constants {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

// sum_k (x/2)^(2k + order) / (k! (k + order)!), stopped once the term is
// below 1e-17 of the partial sum (the tail is then geometric and smaller).
double bessel_i_series(int order, double x) {
  const double q = 0.25 * x * x;
  double term = order == 0 ? 1.0 : 0.5 * x;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (term <= 1e-17 * sum && k > 20) return sum;
  }
  throw NumericError("modified Bessel series did not converge");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

double c_n(int n) {
  if (n < 2) throw InvalidInput("c_n requires n >= 2");
  const double pairs = 0.5 * static_cast<double>(n) * (n - 1);
  return pairs * std::pow(0.75, n - 2);
}

double reduction_to_two(int n, double e2_value, double epsilon) {
  if (e2_value < 0.0) throw InvalidInput("reduction_to_two: E2 must be nonnegative");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidInput("reduction_to_two: epsilon must lie in (0, 1)");
  const double cn = c_n(n);
  const double a = cn * (1.0 - epsilon);
  return kPi2 * a * e2_value / (kPi2 + e2_value * (a + 16.0 * (1.0 / epsilon - 1.0)));
}

double bessel_i0(double x) { return bessel_i_series(0, x); }
double bessel_i1(double x) { return bessel_i_series(1, x); }

KAlpha k_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw InvalidInput("k_alpha requires alpha in [0, 2]");
  if (alpha == 0.0) return {2.0, true};
  const double x = std::sqrt(2.0 * alpha);
  return {x * bessel_i0(x) / bessel_i1(x), false};
}

double medium_box_bound(double alpha, double gamma, int n) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw InvalidInput("medium_box_bound requires alpha in [0, 2]");
  if (!(gamma > 0.0)) throw InvalidInput("medium_box_bound requires gamma > 0");
  if (n < 1) throw InvalidInput("medium_box_bound requires n >= 1");
  const double pairs = static_cast<double>(std::max(n - 1, 0));
  if (alpha == 0.0 || pairs == 0.0) return 0.0;
  if (gamma >= std::numbers::sqrt2) return 2.0 * alpha / (gamma * gamma) * n * pairs;
  const double k = k_alpha(alpha).value;
  const double first = 1.0 / (1.0 - 0.5 * gamma * gamma);
  const double numer = alpha * std::min(first, 0.5 * k);
  const double denom = k + 2.0 * alpha * (-std::log(gamma / std::numbers::sqrt2));
  return numer / denom * pairs;
}

FiniteNResult finite_n_reduction(const std::map<int, double>& base_values, std::int64_t particles) {
  if (base_values.empty()) throw InvalidInput("finite_n_reduction: no base values");
  // The block is 4^(k-1)+1 .. 4^k: recover k from the largest key.
  const int top = base_values.rbegin()->first;
  int k = 0;
  std::int64_t pow4 = 1;
  while (pow4 < top) {
    pow4 *= 4;
    ++k;
  }
  if (pow4 != top || k < 1) throw InvalidInput("finite_n_reduction: largest base index must be a power of 4");
  const std::int64_t lo = pow4 / 4 + 1;
  for (std::int64_t n = lo; n <= pow4; ++n) {
    if (!base_values.count(static_cast<int>(n)))
      throw InvalidInput("finite_n_reduction: missing base value for n = " + std::to_string(n));
  }
  double base_min = std::numeric_limits<double>::infinity();
  for (const auto& [n, e] : base_values) {
    if (n < lo) throw InvalidInput("finite_n_reduction: base index below the block");
    if (!(e > 0.0)) throw PreconditionViolated("finite_n_reduction: base value for n = " + std::to_string(n) + " is not positive");
    base_min = std::min(base_min, e);
  }
  if (particles < pow4) throw InvalidInput("finite_n_reduction requires N >= 4^k");

  FiniteNResult result;
  result.k = k;
  result.base_min = base_min;
  // e_(4^l) >= 4 e_(4^(l-1)): each quadrupling multiplies the floor by 4.
  double floor_value = base_min;
  std::int64_t n = pow4;
  result.trace.push_back({n, floor_value});
  while (n < particles && n <= std::numeric_limits<std::int64_t>::max() / 4) {
    n *= 4;
    floor_value *= 4.0;
    result.trace.push_back({n, floor_value});
  }
  result.value = std::ldexp(1.0, -2 * k) * static_cast<double>(particles) * base_min;
  return result;
}

BoxRegime classify(double gamma, double c1, double c2) {
  if (!(c1 < c2)) throw InvalidInput("regime thresholds require c1 < c2");
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  BoxRegime r{gamma, Regime::medium, c1, c2};
  if (gamma < c1) r.regime = Regime::large;
  else if (gamma > c2) r.regime = Regime::small;
  return r;
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::large: return "large";
    case Regime::medium: return "medium";
    case Regime::small: return "small";
  }
  return "unknown";
}

std::int64_t corridor_area(std::int64_t side, std::int64_t radius) {
  if (side <= 0 || radius < 0 || 4 * radius > side) throw InvalidInput("corridor requires 0 <= 4R <= L");
  const std::int64_t inner = side - 4 * radius;
  return side * side - inner * inner;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::exact_formula: return "exact-formula";
    case Provenance::measured: return "measured";
    case Provenance::abstract_parameter: return "abstract-parameter";
  }
  return "unknown";
}

void ConstantLedger::set(const std::string& name, LedgerEntry entry) { entries_[name] = std::move(entry); }

void ConstantLedger::set_value(const std::string& name, double value, Provenance provenance,
                               const std::string& formula) {
  LedgerEntry e;
  e.value = value;
  e.provenance = provenance;
  e.formula = formula;
  e.symbolic = name;
  entries_[name] = std::move(e);
}

void ConstantLedger::set_abstract(const std::string& name, const std::string& formula,
                                  std::optional<double> configured) {
  LedgerEntry e;
  e.value = configured;
  e.provenance = Provenance::abstract_parameter;
  e.formula = formula;
  e.symbolic = name;
  entries_[name] = std::move(e);
}

const LedgerEntry& ConstantLedger::at(const std::string& name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) throw LedgerIncomplete(name);
  return it->second;
}

void ConstantLedger::derive(const std::string& name, const std::vector<std::string>& inputs,
                            const std::string& formula, const std::string& symbolic,
                            const std::function<double()>& compute) {
  LedgerEntry e;
  e.provenance = Provenance::exact_formula;
  e.formula = formula;
  e.symbolic = symbolic;
  e.depends_on = inputs;
  bool numeric = true;
  std::set<std::string> assumes;
  for (const auto& in : inputs) {
    const LedgerEntry& src = at(in);
    if (!src.value) numeric = false;
    if (src.provenance == Provenance::measured) e.provenance = Provenance::measured;
    if (src.provenance == Provenance::abstract_parameter && src.value) assumes.insert(in);
    assumes.insert(src.assumes.begin(), src.assumes.end());
  }
  e.assumes.assign(assumes.begin(), assumes.end());
  if (numeric) e.value = compute();
  entries_[name] = std::move(e);
}

nlohmann::json ConstantLedger::to_json() const {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, e] : entries_) {
    nlohmann::json j;
    j["value"] = e.value ? nlohmann::json(*e.value) : nlohmann::json(nullptr);
    j["provenance"] = to_string(e.provenance);
    j["formula"] = e.formula;
    j["depends_on"] = e.depends_on;
    j["symbolic"] = e.symbolic;
    j["assumes"] = e.assumes;
    out[name] = std::move(j);
  }
  return out;
}

std::string ConstantLedger::to_dot() const {
  std::ostringstream os;
  os << "digraph ledger {\n  rankdir=LR;\n";
  for (const auto& [name, e] : entries_) {
    const char* shape = e.provenance == Provenance::abstract_parameter ? "box"
                        : e.provenance == Provenance::measured        ? "ellipse"
                                                                       : "oval";
    os << "  \"" << name << "\" [shape=" << shape << ", label=\"" << name << "\\n"
       << (e.value ? fmt(*e.value) : std::string("symbolic")) << "\\n" << to_string(e.provenance) << "\"";
    if (!e.value) os << ", style=dashed";
    os << "];\n";
  }
  for (const auto& [name, e] : entries_)
    for (const auto& in : e.depends_on) os << "  \"" << in << "\" -> \"" << name << "\";\n";
  os << "}\n";
  return os.str();
}

ConstantLedger assemble_global(const ConstantLedger& ledger) {
  for (const char* required : {"C_LE", "C_2", "N_lower", "N_upper", "b_2", "alpha"}) (void)ledger.at(required);
  ConstantLedger out = ledger;
  const auto v = [&out](const char* name) { return *out.at(name).value; };

  out.derive("epsilon", {"C_LE", "alpha", "N_lower", "N_upper"}, "C_LE |alpha-1| N_lower / (N_upper + C_LE |alpha-1| N_upper)",
             "C_LE |alpha-1| N_lower / (N_upper + C_LE |alpha-1| N_upper)", [&] {
               const double a = v("C_LE") * std::abs(v("alpha") - 1.0);
               return a * v("N_lower") / (v("N_upper") + a * v("N_upper"));
             });
  if (const auto& eps = out.at("epsilon").value; eps && !(*eps < 1.0))
    throw PreconditionViolated("epsilon = " + fmt(*eps) + " is not below 1 (requires N_lower <= N_upper)");

  out.derive("C_FN", {"C_2", "N_upper", "C_LE", "N_lower", "alpha"},
             "(C_2 / N_upper) C_LE N_lower / (N_upper + C_LE |alpha-1| N_upper)",
             "(C_2 / N_upper) C_LE N_lower / (N_upper + C_LE |alpha-1| N_upper)", [&] {
               const double cle = v("C_LE");
               return v("C_2") / v("N_upper") * cle * v("N_lower") /
                      (v("N_upper") + cle * std::abs(v("alpha") - 1.0) * v("N_upper"));
             });

  const bool fn_numeric = out.at("C_FN").value.has_value();
  out.derive("C_EA", {"C_FN", "b_2", "C_2", "N_lower"}, "min{C_FN / b_2, 1 / (C_2 N_lower)}",
             fn_numeric ? "min{" + fmt(*out.at("C_FN").value) + "/b_2, 1/(C_2 N_lower)}"
                        : "min{C_FN/b_2, 1/(C_2 N_lower)}",
             [&] { return std::min(v("C_FN") / v("b_2"), 1.0 / (v("C_2") * v("N_lower"))); });
  return out;
}

ConstantLedger build_chain(const ChainInputs& in) {
  if (!(in.n_lower > 0.0 && in.n_lower <= in.n_upper)) throw InvalidInput("requires 0 < N_lower <= N_upper");
  if (!(in.alpha >= 0.0 && in.alpha <= 2.0)) throw InvalidInput("alpha must lie in [0, 2]");
  if (!(in.gamma > 0.0)) throw InvalidInput("gamma must be positive");
  const int n_min = static_cast<int>(std::ceil(in.n_lower));
  const int n_max = static_cast<int>(std::floor(in.n_upper));
  if (n_min > n_max) throw InvalidInput("no integer particle count between N_lower and N_upper");

  ConstantLedger L;
  L.set_value("alpha", in.alpha, Provenance::exact_formula, "statistics parameter (input)");
  L.set_value("gamma", in.gamma, Provenance::exact_formula, "R / L (input)");
  L.set_abstract("N_lower", "lower mass window of the local exclusion (configured)", in.n_lower);
  L.set_abstract("N_upper", "upper mass window of the local exclusion (configured)", in.n_upper);
  L.set_abstract("c_1", "large-box threshold, must be below 1/12 (configured)", in.c1);
  L.set_abstract("c_2", "small-box threshold, must exceed sqrt 2 (configured)", in.c2);
  L.set_abstract("c_inner", "constant inside the two-anyon bound (configured)", in.c_inner);
  L.set_abstract("N_bar", "finite-N block end 4^k (configured)", in.n_bar);
  L.set_value("reduction_C1", kReductionC1, Provenance::exact_formula, "2 + 256/pi^2");
  L.set_value("reduction_C2", kReductionC2, Provenance::exact_formula, "8/pi^2");
  if (in.universal_c2) L.set_value("C_2", *in.universal_c2, Provenance::measured, "local uncertainty constant (measured surrogate)");
  else L.set_abstract("C_2", "universal local uncertainty constant");
  if (in.overlap_b2) L.set_value("b_2", *in.overlap_b2, Provenance::measured, "max square overlap from the covering audit");
  else L.set_abstract("b_2", "covering overlap constant for squares in the plane");

  const BoxRegime regime = classify(in.gamma, in.c1, in.c2);
  const double a1 = std::abs(in.alpha - 1.0);
  const auto per_particle_min = [&](const std::function<double(int)>& bound) {
    double best = std::numeric_limits<double>::infinity();
    for (int n = n_min; n <= n_max; ++n) best = std::min(best, bound(n) / (a1 * n));
    return best;
  };

  LedgerEntry regime_entry;
  regime_entry.value = static_cast<double>(static_cast<int>(regime.regime));
  regime_entry.formula = "large iff gamma < c_1, medium iff c_1 <= gamma <= c_2, small iff gamma > c_2";
  regime_entry.symbolic = to_string(regime.regime);
  regime_entry.depends_on = {"gamma", "c_1", "c_2"};
  regime_entry.assumes = {"c_1", "c_2"};
  L.set("regime", regime_entry);

  std::vector<std::string> le_inputs{"alpha", "gamma", "N_lower", "N_upper", "regime"};
  std::string le_formula;
  std::function<double()> le_compute;
  switch (regime.regime) {
    case Regime::large: {
      L.derive("E2_lower", {"alpha", "gamma", "c_inner"}, "(pi/48) g^2(c_inner alpha_2, 12 gamma) (1 - 12 gamma)_+^3",
               "E2_lower", [&] { return radial::e2_lower_constant(in.alpha, in.gamma, in.c_inner); });
      le_inputs.push_back("E2_lower");
      le_formula = "min_n reduction_to_two(n, E2_lower, 1/2) / (|alpha-1| n)";
      le_compute = [&, e2 = *L.at("E2_lower").value] {
        return per_particle_min([&](int n) { return n < 2 ? 0.0 : reduction_to_two(n, e2, 0.5); });
      };
      break;
    }
    case Regime::medium: {
      const KAlpha k = in.alpha > 0.0 ? k_alpha(in.alpha) : KAlpha{};
      L.set_value("K_alpha", k.value, Provenance::exact_formula,
                  k.is_limit ? "limit x I0(x)/I1(x) at x -> 0" : "sqrt(2 alpha) I0(sqrt(2 alpha)) / I1(sqrt(2 alpha))");
      le_inputs.push_back("K_alpha");
      le_formula = "min_n medium_box_bound(alpha, gamma, n) / (|alpha-1| n)";
      le_compute = [&] { return per_particle_min([&](int n) { return medium_box_bound(in.alpha, in.gamma, n); }); };
      break;
    }
    case Regime::small: {
      if (in.small_box_count) {
        L.set_value("N_underline", *in.small_box_count, Provenance::measured,
                    "max over sampled fields of the count of eigenvalues <= 2");
      } else {
        L.set_abstract("bs_shift", "Birman-Schwinger shift e = Lambda - lambda (configured)", in.bs_shift);
        L.set_abstract("bs_power", "Birman-Schwinger power m (configured)", in.bs_power);
        L.derive("N_underline", {"bs_shift", "bs_power"}, "floor f(2) with f the Birman-Schwinger sum", "N_underline",
                 [&] { return std::floor(magnetic::birman_schwinger_bound(2.0, 2.0 - in.bs_shift, in.bs_power)); });
      }
      le_inputs.push_back("N_underline");
      le_formula = "min_n (n - N_underline)_+ / (|alpha-1| n)";
      le_compute = [&, nu = *L.at("N_underline").value] {
        return per_particle_min([&](int n) { return std::max(n - nu, 0.0); });
      };
      break;
    }
  }

  if (a1 == 0.0) {
    LedgerEntry le;
    le.provenance = Provenance::abstract_parameter;
    le.formula = "undefined at alpha = 1: the box bounds carry the factor |alpha-1|";
    le.symbolic = "C_LE";
    le.depends_on = le_inputs;
    L.set("C_LE", le);
  } else {
    L.derive("C_LE", le_inputs, le_formula, "C_LE", le_compute);
  }

  std::map<int, double> block;
  for (int n = in.n_bar / 4 + 1; n <= in.n_bar; ++n) block[n] = static_cast<double>(n);
  L.derive("C_k", {"N_bar"}, "4^-k with N_bar = 4^k", "4^-k", [&] {
    return std::ldexp(1.0, -2 * finite_n_reduction(block, in.n_bar).k);
  });

  return assemble_global(L);
}

}  // namespace anyonlt::constants
