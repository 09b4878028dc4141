#include "anyonlt/report.hpp"

#include <set>

namespace anyonlt::report {

namespace {

using nlohmann::json;

// Semantic problems found after parsing; the caller maps the key back to a
// position in the source text.
struct KeyProblem {
  std::string key;
  std::string message;
};

class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw KeyProblem{"", where_ + " must be an object"};
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw KeyProblem{key, "wrong type for '" + std::string(key) + "' in " + where_};
    }
  }

  template <typename T>
  void get(const char* key, std::optional<T>& out) {
    seen_.insert(key);
    if (!obj_.contains(key) || obj_.at(key).is_null()) return;
    T value{};
    get(key, value);
    out = value;
  }

  const json* child(const char* key) {
    seen_.insert(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }

  void finish() const {
    for (const auto& [key, _] : obj_.items())
      if (!seen_.count(key)) throw KeyProblem{key, "unknown key '" + key + "' in " + where_};
  }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

template <typename Block, typename Fn>
void read_block(Reader& top, const char* key, Block& block, Fn&& fill) {
  if (const json* j = top.child(key)) {
    Reader r(*j, key);
    fill(r, block);
    r.finish();
  }
}

void check_positive(bool ok, const char* key, const char* message) {
  if (!ok) throw KeyProblem{key, message};
}

RunConfig read(const json& j) {
  RunConfig c;
  Reader top(j, "config");
  top.get("suite", c.suite);
  top.get("seed", c.seed);
  top.get("out", c.out);
  top.get("parallel", c.parallel);
  top.get("tolerances", c.tolerances);
  read_block(top, "bessel", c.bessel, [](Reader& r, BesselConfig& b) {
    r.get("nu", b.nu);
    r.get("gamma", b.gamma);
    r.get("grid_points", b.grid_points);
  });
  read_block(top, "magnetic", c.magnetic, [](Reader& r, MagneticConfig& m) {
    r.get("n_side", m.n_side);
    r.get("spectrum_n_side", m.spectrum_n_side);
    r.get("fields", m.fields);
    r.get("sources", m.sources);
    r.get("amplitude", m.amplitude);
    r.get("e", m.e);
    r.get("lambda", m.lambda);
    r.get("bs_shift", m.bs_shift);
    r.get("bs_power", m.bs_power);
  });
  read_block(top, "two_anyon", c.two_anyon, [](Reader& r, TwoAnyonConfig& t) {
    r.get("alpha", t.alpha);
    r.get("gamma", t.gamma);
    r.get("n_side", t.n_side);
    r.get("mode", t.mode);
    r.get("flux_weight", t.flux_weight);
    r.get("alphas", t.alphas);
    r.get("scaling_alpha", t.scaling_alpha);
    r.get("trial_nodes", t.trial_nodes);
  });
  read_block(top, "covering", c.covering, [](Reader& r, CoveringConfig& v) {
    r.get("seeds", v.seeds);
    r.get("spacing", v.spacing);
    r.get("total_mass", v.total_mass);
    r.get("n_lower", v.n_lower);
    r.get("n_upper", v.n_upper);
    r.get("density", v.density);
  });
  read_block(top, "constants", c.constants, [](Reader& r, ConstantsConfig& k) {
    r.get("alpha", k.alpha);
    r.get("gamma", k.gamma);
    r.get("n_lower", k.n_lower);
    r.get("n_upper", k.n_upper);
    r.get("c1", k.c1);
    r.get("c2", k.c2);
    r.get("c_inner", k.c_inner);
    r.get("n_bar", k.n_bar);
    r.get("universal_c2", k.universal_c2);
    r.get("overlap_b2", k.overlap_b2);
    if (const json* l = r.child("ledger")) {
      if (!l->is_object()) throw KeyProblem{"ledger", "ledger overrides must be an object"};
      k.ledger = *l;
    }
  });
  top.finish();

  static const std::set<std::string> suites{"verify-bessel", "verify-diamagnetic", "two-anyon", "covering", "constants", "all"};
  check_positive(suites.count(c.suite) > 0, "suite", "unknown suite");
  check_positive(c.parallel >= 1, "parallel", "parallel must be at least 1");
  check_positive(c.two_anyon.mode == "kinetic-only" || c.two_anyon.mode == "full", "mode",
                 "mode must be kinetic-only or full");
  check_positive(c.two_anyon.flux_weight == "unit" || c.two_anyon.flux_weight == "alpha", "flux_weight",
                 "flux_weight must be unit or alpha");
  check_positive(c.magnetic.fields >= 1 && c.magnetic.sources >= 1, "fields", "fields and sources must be positive");
  check_positive(c.covering.seeds >= 1, "seeds", "seeds must be positive");
  return c;
}

// 1-based line and column of a byte offset.
std::pair<int, int> position(const std::string& text, std::size_t offset) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

double RunConfig::tol(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    // byte is one past the offending character.
    const auto [line, column] = position(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("malformed JSON: " + std::string(e.what()), line, column);
  }
  try {
    return read(j);
  } catch (const KeyProblem& p) {
    const std::size_t at = p.key.empty() ? 0 : text.find("\"" + p.key + "\"");
    const auto [line, column] = position(text, at == std::string::npos ? 0 : at);
    throw ConfigError(p.message, line, column);
  }
}

RunConfig config_from_json(const json& j) {
  try {
    return read(j);
  } catch (const KeyProblem& p) {
    throw ConfigError(p.message, 0, 0);
  }
}

json to_json(const RunConfig& c) {
  return json{
      {"suite", c.suite},
      {"seed", c.seed},
      {"out", c.out},
      {"parallel", c.parallel},
      {"tolerances", c.tolerances},
      {"bessel", {{"nu", optional_json(c.bessel.nu)}, {"gamma", optional_json(c.bessel.gamma)},
                  {"grid_points", c.bessel.grid_points}}},
      {"magnetic", {{"n_side", c.magnetic.n_side}, {"spectrum_n_side", c.magnetic.spectrum_n_side},
                    {"fields", c.magnetic.fields}, {"sources", c.magnetic.sources},
                    {"amplitude", c.magnetic.amplitude}, {"e", c.magnetic.e}, {"lambda", c.magnetic.lambda},
                    {"bs_shift", c.magnetic.bs_shift}, {"bs_power", c.magnetic.bs_power}}},
      {"two_anyon", {{"alpha", optional_json(c.two_anyon.alpha)}, {"gamma", c.two_anyon.gamma},
                     {"n_side", c.two_anyon.n_side}, {"mode", c.two_anyon.mode},
                     {"flux_weight", c.two_anyon.flux_weight}, {"alphas", c.two_anyon.alphas},
                     {"scaling_alpha", c.two_anyon.scaling_alpha}, {"trial_nodes", c.two_anyon.trial_nodes}}},
      {"covering", {{"seeds", c.covering.seeds}, {"spacing", c.covering.spacing},
                    {"total_mass", c.covering.total_mass}, {"n_lower", c.covering.n_lower},
                    {"n_upper", c.covering.n_upper}, {"density", optional_json(c.covering.density)}}},
      {"constants", {{"alpha", c.constants.alpha}, {"gamma", c.constants.gamma},
                     {"n_lower", c.constants.n_lower}, {"n_upper", c.constants.n_upper}, {"c1", c.constants.c1},
                     {"c2", c.constants.c2}, {"c_inner", c.constants.c_inner}, {"n_bar", c.constants.n_bar},
                     {"universal_c2", optional_json(c.constants.universal_c2)},
                     {"overlap_b2", optional_json(c.constants.overlap_b2)}, {"ledger", c.constants.ledger}}},
  };
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "unknown";
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (c.status == Status::fail) return false;
  return true;
}

json Report::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"status", report::to_string(c.status)},
                           {"value", c.value},
                           {"bound", c.bound},
                           {"tolerance", c.tolerance},
                           {"detail", c.detail}});
  }
  return json{{"suite", suite},
              {"status", passed() ? "pass" : "fail"},
              {"version", kVersion},
              {"checks", checks_json},
              {"artifacts", artifacts},
              {"config", config}};
}

json Report::timings_json() const {
  json t = json::object();
  for (const auto& c : checks) t[c.name] = c.runtime_seconds;
  return json{{"suite", suite}, {"runtime_seconds", t}};
}

}  // namespace anyonlt::report
