#include "anyonlt/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "anyonlt/constants.hpp"
#include "anyonlt/covering.hpp"
#include "anyonlt/magnetic_grid.hpp"
#include "anyonlt/radial.hpp"
#include "anyonlt/svg.hpp"
#include "anyonlt/two_anyon.hpp"

namespace anyonlt::suites {

namespace {

using nlohmann::json;
using report::Check;
using report::RunConfig;
using report::Status;

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

Check make_check(std::string name, bool ok, json value, json bound, double tol, std::string detail = {}) {
  Check c;
  c.name = std::move(name);
  c.status = ok ? Status::pass : Status::fail;
  c.value = std::move(value);
  c.bound = std::move(bound);
  c.tolerance = tol;
  c.detail = std::move(detail);
  return c;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

model::FluxWeight flux_weight_of(const std::string& s) {
  return s == "alpha" ? model::FluxWeight::alpha : model::FluxWeight::unit;
}

model::EnergyMode mode_of(const std::string& s) {
  return s == "full" ? model::EnergyMode::full : model::EnergyMode::kinetic_only;
}

std::vector<magnetic::Index> random_sources(int n_side, int count, std::mt19937_64& rng) {
  std::vector<magnetic::Index> out;
  const auto dim = static_cast<std::uint64_t>(n_side) * n_side;
  for (int s = 0; s < count; ++s) out.push_back(static_cast<magnetic::Index>(rng() % dim));
  return out;
}

std::uint64_t field_seed(const RunConfig& c, int f) { return c.seed * 1000003ULL + static_cast<std::uint64_t>(f); }

// ---------------------------------------------------------------- bessel

Check bessel_plateau(const RunConfig& c, SuiteOutput&) {
  const double tol = c.tol("bessel_plateau", 1e-12);
  double worst = 0.0;
  for (const double gamma : {1.0, 1.5})
    for (int i = 0; i < 32; ++i) {
      const double nu = 4.0 * i / 31.0;
      worst = std::max(worst, std::abs(radial::g_squared(nu, gamma).g - nu));
    }
  return make_check("bessel_plateau", worst <= tol, worst, tol, tol, "max |g(nu, gamma) - nu| over 32 nu, gamma in {1, 1.5}");
}

Check bessel_limit(const RunConfig& c, SuiteOutput&) {
  const double tol = c.tol("bessel_limit", 5e-3);
  radial::RadialOptions opts;
  opts.grid_points = c.bessel.grid_points;
  const double g = radial::g_squared(1.0, 1e-4, opts).g;
  const double j1 = radial::bessel_jprime_zero(1.0);
  const double gap = std::abs(g - j1);
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 64; ++i) {
    const double nu = 2.0 * i / 64.0;
    worst_margin = std::min(worst_margin, radial::bessel_jprime_zero(nu) - std::sqrt(2.0 * nu));
  }
  const bool ok = gap <= tol && worst_margin >= 0.0;
  return make_check("bessel_limit", ok, json{{"g_1_1e-4", g}, {"jprime_1", j1}, {"gap", gap}, {"min_jprime_minus_sqrt2nu", worst_margin}},
                    tol, tol, "|g(1, 1e-4) - j'_1| and j'_nu >= sqrt(2 nu) on 64 nu in (0, 2]");
}

// ---------------------------------------------------------------- magnetic

Check free_spectrum(const RunConfig& c, SuiteOutput&) {
  const double tol = c.tol("free_spectrum", 0.01);
  const auto op = magnetic::assemble_magnetic_laplacian(magnetic::LinkGrid2D::zero_field(c.magnetic.spectrum_n_side));
  const auto s = magnetic::lowest_eigenvalues(op, 4, 1e-9, c.seed);
  const std::vector<double> target{0.0, kPi2, kPi2, 2.0 * kPi2};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(s.eigenvalues[i] - target[i]) / std::max(target[i], kPi2));
  return make_check("free_spectrum", worst <= tol, json{{"eigenvalues", s.eigenvalues}, {"max_relative_error", worst}},
                    target, tol, "lowest four Neumann eigenvalues at zero field, error relative to max(target, pi^2)");
}

Check gauge_invariance(const RunConfig& c, SuiteOutput&) {
  const double tol = c.tol("gauge_invariance", 1e-10);
  const int n = c.magnetic.n_side;
  const auto grid = magnetic::phases_from_field(magnetic::random_smooth_field(c.magnetic.amplitude, c.seed), n);
  std::mt19937_64 rng(c.seed ^ 0x9a0e);
  std::vector<double> phi(static_cast<std::size_t>(n) * n);
  for (auto& p : phi) p = 2.0 * std::numbers::pi * uniform01(rng) * 10.0;
  const auto a = magnetic::lowest_eigenvalues(magnetic::assemble_magnetic_laplacian(grid), 6, 1e-10, c.seed);
  const auto b = magnetic::lowest_eigenvalues(magnetic::assemble_magnetic_laplacian(grid.gauge_transformed(phi)), 6, 1e-10, c.seed);
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(a.eigenvalues[i] - b.eigenvalues[i]));
  return make_check("gauge_invariance", worst <= tol, json{{"max_difference", worst}, {"eigenvalues", a.eigenvalues}}, tol,
                    tol, "lowest six eigenvalues before and after a random gauge transformation");
}

Check diamagnetic(const RunConfig& c, SuiteOutput& out) {
  const double tol = c.tol("diamagnetic", 1e-10);
  const double floor_tol = c.tol("lambda1_floor", 1e-9);
  const auto& m = c.magnetic;
  std::mt19937_64 rng(c.seed ^ 0xd1a);
  double worst = -std::numeric_limits<double>::infinity();
  double min_lambda1 = std::numeric_limits<double>::infinity();
  json violations = json::array(), gaps = json::array();
  for (int f = 0; f < m.fields; ++f) {
    const auto sources = random_sources(m.n_side, m.sources, rng);
    const auto r = magnetic::diamagnetic_check(magnetic::random_smooth_field(m.amplitude, field_seed(c, f)), m.n_side, m.e, sources);
    worst = std::max(worst, r.max_violation);
    min_lambda1 = std::min(min_lambda1, r.lambda1_field);
    violations.push_back(r.max_violation);
    gaps.push_back(r.lambda1_gap());
  }
  out.report.artifacts["diamagnetic"] = {{"max_violation", worst}, {"violations", violations}, {"lambda1_gaps", gaps}};
  const bool ok = worst <= tol && min_lambda1 >= -floor_tol;
  return make_check("diamagnetic_green", ok, json{{"max_violation", worst}, {"min_lambda1", min_lambda1}}, tol, tol,
                    "max over fields, sources and nodes of |G^A| - G^0, and lambda_1(A) >= -1e-9");
}

Check eigenvalue_counting(const RunConfig& c, SuiteOutput& out) {
  const auto& m = c.magnetic;
  const double bound = magnetic::birman_schwinger_bound(m.lambda, m.lambda - m.bs_shift, m.bs_power);
  int worst = 0;
  json counts = json::array();
  for (int f = 0; f < m.fields; ++f) {
    const auto grid = magnetic::phases_from_field(magnetic::random_smooth_field(m.amplitude, field_seed(c, f)), m.n_side);
    const int count = magnetic::count_below(magnetic::assemble_magnetic_laplacian(grid), m.lambda);
    worst = std::max(worst, count);
    counts.push_back(count);
  }
  out.report.artifacts["counts"] = {{"lambda", m.lambda}, {"counts", counts}, {"birman_schwinger", bound}};
  return make_check("eigenvalue_counting", worst <= bound, json{{"max_count", worst}, {"counts", counts}}, bound, 0.0,
                    "N(Lambda, A) over the sampled fields against the Birman-Schwinger value f(Lambda)");
}

// ---------------------------------------------------------------- two anyons

two_anyon::TwoAnyonResult solve(double alpha, double radius, double side, const RunConfig& c) {
  two_anyon::TwoBodyGrid grid;
  grid.n_side = c.two_anyon.n_side;
  grid.params = model::AnyonParams(alpha, radius);
  grid.domain = model::SquareDomain(model::Vec2::Zero(), side);
  grid.mode = model::EnergyMode::kinetic_only;
  two_anyon::SolveOptions opts;
  opts.seed = c.seed;
  return two_anyon::ground_energy(grid, opts);
}

Check free_limit(const RunConfig& c, SuiteOutput&) {
  const double tol = c.tol("two_anyon_free_limit", 0.02);
  const auto r = solve(0.0, c.two_anyon.gamma, 1.0, c);
  const double rel = std::abs(r.energy - kPi2) / kPi2;
  return make_check("two_anyon_free_limit", rel <= tol, json{{"energy", r.energy}, {"relative_error", rel}}, kPi2, tol,
                    "kinetic-only antisymmetric ground energy at alpha = 0 against pi^2");
}

Check scaling_law(const RunConfig& c, SuiteOutput&) {
  const double tol = c.tol("scaling_law", 0.01);
  const double alpha = c.two_anyon.scaling_alpha, gamma = c.two_anyon.gamma;
  const auto unit = solve(alpha, gamma, 1.0, c);
  const auto big = solve(alpha, 2.0 * gamma, 2.0, c);
  const double rel = std::abs(4.0 * big.energy - unit.energy) / unit.energy;
  return make_check("scaling_law", rel <= tol,
                    json{{"unit_square", unit.energy}, {"side_two_times_four", 4.0 * big.energy}, {"relative_difference", rel}},
                    tol, tol, "E2 on the side-2 square times 4 against the unit square at equal gamma");
}

Check trial_state(const RunConfig& c, SuiteOutput& out) {
  const double conv_tol = c.tol("trial_state_convergence", 1e-6);
  const int nodes = c.two_anyon.trial_nodes;
  double worst = 0.0, worst_conv = 0.0, worst_displayed = 0.0;
  json rows = json::array();
  for (const double alpha : {0.0, 0.5, 1.0, 1.5, 2.0})
    for (const double radius : {0.01, 0.1, 1.0}) {
      const model::AnyonParams p(alpha, radius);
      const auto a = two_anyon::trial_state_bound(p, nodes);
      const auto b = two_anyon::trial_state_bound(p, 2 * nodes);
      worst = std::max(worst, b.weighted_chain);
      worst_displayed = std::max(worst_displayed, b.displayed_chain);
      worst_conv = std::max(worst_conv, std::abs(a.weighted_chain - b.weighted_chain));
      rows.push_back({{"alpha", alpha}, {"R", radius}, {"weighted", b.weighted_chain}, {"displayed", b.displayed_chain},
                      {"quotient", b.raw_quotient}, {"norm_squared", b.norm_squared}});
    }
  out.report.artifacts["trial_state"] = rows;
  return make_check("trial_state_bound", worst <= 8.0 && worst_conv <= conv_tol,
                    json{{"max_weighted_functional", worst}, {"max_displayed_chain", worst_displayed}, {"self_convergence", worst_conv}},
                    8.0, conv_tol,
                    "unnormalized trial functional with weights (1/2, 1/4, 1/4); the single-particle chain is reported alongside");
}

Check statistics_profile(const RunConfig& c, SuiteOutput& out) {
  const double at_one_bound = c.tol("e2_at_alpha_one", 0.05);
  std::vector<double> alphas = c.two_anyon.alphas;
  alphas.push_back(1.0);
  two_anyon::SolveOptions opts;
  opts.seed = c.seed;
  const auto profile = two_anyon::e2_alpha_profile(c.two_anyon.gamma, c.two_anyon.n_side, alphas, c.parallel, opts);
  double at_one = std::numeric_limits<double>::quiet_NaN();
  json points = json::array();
  std::ostringstream csv;
  csv << "alpha,energy,residual\n";
  svg::Series series{"E2", {}, {}};
  auto sorted = profile.points;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.alpha < b.alpha; });
  for (const auto& p : sorted) {
    if (p.alpha == 1.0) at_one = p.energy;
    points.push_back({{"alpha", p.alpha}, {"energy", p.energy}});
    csv << csv_number(p.alpha) << ',' << csv_number(p.energy) << ',' << csv_number(p.residual) << '\n';
    series.x.push_back(p.alpha);
    series.y.push_back(p.energy);
  }
  out.report.artifacts["e2_profile"] = {{"gamma", c.two_anyon.gamma}, {"points", points}, {"infimum_ratio", profile.infimum_ratio}};
  out.files["e2_profile.csv"] = csv.str();
  out.files["e2_profile.svg"] = svg::line_plot({series}, {"Two-anyon ground energy against alpha", "alpha", "E2", false});
  const bool ok = profile.infimum_ratio > 0.0 && at_one < at_one_bound;
  return make_check("e2_statistics_profile", ok, json{{"infimum_ratio", profile.infimum_ratio}, {"energy_at_alpha_one", at_one}},
                    json{{"infimum_ratio", "> 0"}, {"energy_at_alpha_one", at_one_bound}}, at_one_bound,
                    "inf over alpha != 1 of E2/|alpha-1| and E2 at alpha = 1");
}

// ---------------------------------------------------------------- covering

struct CoverCase {
  covering::CoveringCollection collection;
  covering::CoverAudit audit;
  double worst_ratio = 0.0;  // |exact mass - target| / (2 quadrature error)
};

CoverCase cover(const covering::DensityGrid& density, double target,
                const std::function<double(const model::Vec2&, const model::Vec2&)>& exact_mass) {
  CoverCase out;
  out.collection = covering::besicovitch_select(covering::calibrated_candidates(density, target), &density);
  out.audit = covering::audit_cover(out.collection, density, covering::support_of(density));
  const model::Vec2 box_lo = density.origin(), box_hi = density.box_max();
  for (std::size_t k = 0; k < out.collection.squares.size(); ++k) {
    const auto& s = out.collection.squares[k];
    const model::Vec2 half(0.5 * s.side, 0.5 * s.side);
    const model::Vec2 lo = (s.center - half).cwiseMax(box_lo), hi = (s.center + half).cwiseMin(box_hi);
    const double err = std::abs(exact_mass(lo, hi) - target);
    out.worst_ratio = std::max(out.worst_ratio, err / (2.0 * out.collection.quadrature_errors[k]));
  }
  return out;
}

Check covering_check(const RunConfig& c, SuiteOutput& out) {
  const auto& cc = c.covering;
  const double h = cc.spacing;
  const double target = 0.5 * (cc.n_lower + cc.n_upper);
  double worst_ratio = 0.0;
  int worst_overlap = 0;
  bool covered = true;
  json per_seed = json::array();
  for (int s = 0; s < cc.seeds; ++s) {
    std::mt19937_64 rng(c.seed + static_cast<std::uint64_t>(s));
    // Widths in [1, 2] with an even number of cells so the 2h subsample exists.
    const auto dimension = [&] {
      int cells = static_cast<int>(std::lround((1.0 + uniform01(rng)) / h));
      return h * (cells + cells % 2);
    };
    const double w = dimension(), ht = dimension();
    const auto uni = covering::uniform_density({0, 0}, w, ht, h, cc.total_mass);
    const double level = cc.total_mass / (w * ht);
    const auto cu = cover(uni, target, [&](const model::Vec2& lo, const model::Vec2& hi) { return level * (hi - lo).prod(); });

    const model::Vec2 mean(w * (0.3 + 0.4 * uniform01(rng)), ht * (0.3 + 0.4 * uniform01(rng)));
    const double sigma = 0.1 + 0.15 * uniform01(rng);
    const auto gauss = covering::gaussian_density({0, 0}, w, ht, h, mean, sigma, cc.total_mass);
    const double amp = covering::gaussian_amplitude(gauss, mean, sigma);
    const auto cg = cover(gauss, target, [&](const model::Vec2& lo, const model::Vec2& hi) {
      return covering::gaussian_rectangle_mass(amp, mean, sigma, lo, hi);
    });

    for (const auto* cs : {&cu, &cg}) {
      worst_ratio = std::max(worst_ratio, cs->worst_ratio);
      worst_overlap = std::max(worst_overlap, cs->audit.max_overlap);
      covered = covered && cs->audit.covered;
    }
    per_seed.push_back({{"uniform", {{"squares", cu.collection.squares.size()}, {"max_overlap", cu.audit.max_overlap}}},
                        {"gaussian", {{"squares", cg.collection.squares.size()}, {"max_overlap", cg.audit.max_overlap}}}});

    if (s == 0) {
      svg::Heatmap map{gauss.nx(), gauss.ny(), 0.0, w, 0.0, ht, gauss.values()};
      std::vector<svg::Rect> rects;
      for (const auto& q : cg.collection.squares)
        rects.push_back({q.center.x() - 0.5 * q.side, q.center.y() - 0.5 * q.side, q.side, q.side});
      out.files["covering_overlay.svg"] = svg::overlay_plot(map, rects, {"Calibrated squares over a Gaussian density", "x", "y", false});
    }
  }
  out.report.artifacts["covering"] = {{"target_mass", target}, {"seeds", per_seed}};
  const bool ok = worst_ratio <= 1.0 && covered && worst_overlap <= 16;
  return make_check("covering", ok,
                    json{{"max_mass_error_over_two_quadrature_errors", worst_ratio}, {"covered", covered}, {"max_overlap", worst_overlap}},
                    json{{"mass_ratio", 1.0}, {"max_overlap", 16}}, 0.0,
                    "exact mass of each selected square against the target, coverage of the support, overlap count");
}

// ---------------------------------------------------------------- constants

Check constant_chain(const RunConfig& c, SuiteOutput&) {
  using namespace constants;
  const double tol = c.tol("constant_chain", 1e-12);
  ConstantLedger L;
  L.set_value("C_LE", 0.1, Provenance::exact_formula, "example");
  L.set_value("alpha", 0.0, Provenance::exact_formula, "example");
  L.set_value("N_lower", 5.0, Provenance::exact_formula, "example");
  L.set_value("N_upper", 10.0, Provenance::exact_formula, "example");
  L.set_value("C_2", 0.5, Provenance::exact_formula, "example");
  L.set_value("b_2", 16.0, Provenance::exact_formula, "example");
  const auto G = assemble_global(L);
  // Hand evaluation: C_LE |alpha-1| = 0.1.
  const double eps = 0.5 / 11.0;
  const double cfn = (0.5 / 10.0) * 0.1 * 5.0 / (10.0 + 0.1 * 10.0);
  const double cea = std::min(cfn / 16.0, 1.0 / (0.5 * 5.0));
  const double err = std::max({std::abs(*G.at("epsilon").value - eps) / eps, std::abs(*G.at("C_FN").value - cfn) / cfn,
                               std::abs(*G.at("C_EA").value - cea) / cea});

  std::mt19937_64 rng(c.seed ^ 0xc0);
  double max_eps = 0.0;
  for (int t = 0; t < 1000; ++t) {
    ConstantLedger R;
    const double nl = 1.0 + 100.0 * uniform01(rng);
    R.set_value("C_LE", std::exp(20.0 * uniform01(rng) - 10.0), Provenance::measured, "random");
    R.set_value("alpha", 2.0 * uniform01(rng), Provenance::measured, "random");
    R.set_value("N_lower", nl, Provenance::measured, "random");
    R.set_value("N_upper", nl * (1.0 + 10.0 * uniform01(rng)), Provenance::measured, "random");
    R.set_value("C_2", uniform01(rng) + 1e-3, Provenance::measured, "random");
    R.set_value("b_2", 1.0 + 20.0 * uniform01(rng), Provenance::measured, "random");
    max_eps = std::max(max_eps, *assemble_global(R).at("epsilon").value);
  }

  bool exact = true;
  for (int t = 0; t < 100; ++t) {
    const int k = 1 + static_cast<int>(rng() % 3);
    const int top = 1 << (2 * k);
    std::map<int, double> base;
    for (int n = top / 4 + 1; n <= top; ++n) base[n] = 0.01 + uniform01(rng);
    const std::int64_t n = top + static_cast<std::int64_t>(rng() % 100000);
    exact = exact && finite_n_reduction(base, 4 * n).value == 4.0 * finite_n_reduction(base, n).value;
  }
  const bool ok = err <= tol && max_eps < 1.0 && exact;
  return make_check("constant_chain", ok,
                    json{{"example_relative_error", err}, {"max_epsilon_random", max_eps}, {"finite_n_exact_quadrupling", exact},
                         {"C_FN", *G.at("C_FN").value}, {"C_EA", *G.at("C_EA").value}},
                    json{{"relative_error", tol}, {"epsilon", "< 1"}}, tol,
                    "example ledger against hand evaluation, epsilon on 1000 random ledgers, value(4N) = 4 value(N)");
}

Check corridor(const RunConfig& c, SuiteOutput&) {
  std::mt19937_64 rng(c.seed ^ 0xc0dd);
  bool ok = true;
  std::int64_t checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::int64_t side = 4 + static_cast<std::int64_t>(rng() % 1000000);
    const std::int64_t radius = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(side / 4 + 1));
    const std::int64_t area = constants::corridor_area(side, radius);
    ok = ok && area == 8 * side * radius - 16 * radius * radius && area <= 8 * side * radius;
    ++checked;
  }
  return make_check("corridor_identity", ok, json{{"cases", checked}, {"all_hold", ok}}, "8LR - 16R^2 <= 8LR", 0.0,
                    "integer L, R with 4R <= L");
}

const std::vector<Criterion> kCriteria{
    {1, "bessel_plateau", 1.0, bessel_plateau},
    {2, "bessel_limit", 10.0, bessel_limit},
    {3, "free_spectrum", 30.0, free_spectrum},
    {4, "gauge_invariance", 30.0, gauge_invariance},
    {5, "diamagnetic_green", 120.0, diamagnetic},
    {6, "eigenvalue_counting", 120.0, eigenvalue_counting},
    {7, "two_anyon_free_limit", 120.0, free_limit},
    {8, "scaling_law", 240.0, scaling_law},
    {9, "trial_state_bound", 10.0, trial_state},
    {10, "e2_statistics_profile", 600.0, statistics_profile},
    {11, "covering", 30.0, covering_check},
    {12, "constant_chain", 5.0, constant_chain},
    {13, "corridor_identity", 1.0, corridor},
};

void run_ids(const RunConfig& c, SuiteOutput& out, std::initializer_list<int> ids) {
  for (const int id : ids) out.report.checks.push_back(run_criterion(kCriteria[static_cast<std::size_t>(id - 1)], c, out));
}

// ---------------------------------------------------------------- suites

void bessel_suite(const RunConfig& c, SuiteOutput& out) {
  radial::RadialOptions opts;
  opts.grid_points = c.bessel.grid_points;
  if (c.bessel.nu && c.bessel.gamma) {
    const double nu = *c.bessel.nu, gamma = *c.bessel.gamma;
    const auto start = std::chrono::steady_clock::now();
    Check check;
    try {
      const auto r = radial::g_squared(nu, gamma, opts);
      json value{{"nu", nu}, {"gamma", gamma}, {"g", r.g}, {"refinement_estimate", r.refinement_estimate}};
      if (gamma >= 1.0) {
        const double tol = c.tol("bessel_plateau", 1e-12);
        check = make_check("bessel_case", std::abs(r.g - nu) <= tol, value, nu, tol, "plateau: g equals nu");
      } else {
        if (nu <= 30.0) value["jprime"] = radial::bessel_jprime_zero(nu);
        check = make_check("bessel_case", std::isfinite(r.g) && r.g > 0.0, value, nullptr, 0.0, "smallest positive Neumann eigenvalue");
      }
    } catch (const std::exception& e) {
      check = make_check("bessel_case", false, nullptr, nullptr, 0.0, e.what());
    }
    check.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.report.checks.push_back(check);
    return;
  }
  run_ids(c, out, {1, 2});
  std::ostringstream csv;
  csv << "nu,gamma,g,jprime,gap\n";
  const std::vector<double> gammas{1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 0.6, 1.0};
  std::vector<svg::Series> series;
  for (const double nu : {0.25, 0.5, 1.0, 2.0}) {
    const double jp = radial::bessel_jprime_zero(nu);
    svg::Series s{"nu = " + csv_number(nu), {}, {}};
    for (const double gamma : gammas) {
      const double g = radial::g_squared(nu, gamma, opts).g;
      csv << csv_number(nu) << ',' << csv_number(gamma) << ',' << csv_number(g) << ',' << csv_number(jp) << ','
          << csv_number(std::abs(g - jp)) << '\n';
      s.x.push_back(gamma);
      s.y.push_back(g);
    }
    series.push_back(std::move(s));
  }
  out.files["bessel_sweep.csv"] = csv.str();
  out.files["bessel_sweep.svg"] = svg::line_plot(series, {"g(nu, gamma) against gamma", "gamma", "g", true});
}

void two_anyon_suite(const RunConfig& c, SuiteOutput& out) {
  const auto& t = c.two_anyon;
  if (!t.alpha) {
    run_ids(c, out, {7, 8, 9, 10});
    return;
  }
  const auto start = std::chrono::steady_clock::now();
  Check check;
  try {
    two_anyon::TwoBodyGrid grid;
    grid.n_side = t.n_side;
    grid.params = model::AnyonParams(*t.alpha, t.gamma);
    grid.mode = mode_of(t.mode);
    grid.flux_weight = flux_weight_of(t.flux_weight);
    two_anyon::SolveOptions opts;
    opts.seed = c.seed;
    const auto r = two_anyon::ground_energy(grid, opts);
    json value{{"alpha", *t.alpha},          {"gamma", t.gamma},
               {"energy", r.energy},         {"quadratic_part", r.quadratic_part},
               {"modulus_term", r.modulus_term}, {"antisymmetry_defect", r.antisymmetry_defect}};
    if (*t.alpha == 0.0 && grid.mode == model::EnergyMode::kinetic_only) {
      const double tol = c.tol("two_anyon_free_limit", 0.02);
      const double rel = std::abs(r.energy - kPi2) / kPi2;
      value["relative_error"] = rel;
      check = make_check("two_anyon_case", rel <= tol, value, kPi2, tol, "free limit against pi^2");
    } else {
      check = make_check("two_anyon_case", std::isfinite(r.energy), value, nullptr, 0.0, "antisymmetric ground energy");
    }
  } catch (const std::exception& e) {
    check = make_check("two_anyon_case", false, nullptr, nullptr, 0.0, e.what());
  }
  check.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.report.checks.push_back(check);
}

covering::DensityGrid named_density(const RunConfig& c) {
  const auto& cc = c.covering;
  const std::string& name = *cc.density;
  const double side = 1.5 - std::fmod(1.5, 2.0 * cc.spacing);
  if (name == "uniform") return covering::uniform_density({0, 0}, side, side, cc.spacing, cc.total_mass);
  if (name == "gaussian")
    return covering::gaussian_density({0, 0}, side, side, cc.spacing, {0.5 * side, 0.5 * side}, 0.2, cc.total_mass);
  if (name == "two-bump") return covering::two_bump_density({0, 0}, side, side, cc.spacing, cc.total_mass);
  std::ifstream in(name);
  if (!in) throw InvalidInput("density is neither a built-in name nor a readable file: " + name);
  std::stringstream text;
  text << in.rdbuf();
  return covering::density_from_csv(text.str());
}

void covering_suite(const RunConfig& c, SuiteOutput& out) {
  if (!c.covering.density) {
    run_ids(c, out, {11});
    return;
  }
  const auto start = std::chrono::steady_clock::now();
  Check check;
  try {
    const auto density = named_density(c);
    const double target = 0.5 * (c.covering.n_lower + c.covering.n_upper);
    const auto col = covering::besicovitch_select(covering::calibrated_candidates(density, target), &density);
    const auto audit = covering::audit_cover(col, density, covering::support_of(density));
    double worst = 0.0;
    json squares = json::array();
    std::vector<svg::Rect> rects;
    for (std::size_t k = 0; k < col.squares.size(); ++k) {
      const auto& q = col.squares[k];
      worst = std::max(worst, std::abs(col.masses[k] - target) / (2.0 * col.quadrature_errors[k]));
      squares.push_back({{"center", {q.center.x(), q.center.y()}}, {"side", q.side}, {"mass", col.masses[k]},
                         {"quadrature_error", col.quadrature_errors[k]}});
      rects.push_back({q.center.x() - 0.5 * q.side, q.center.y() - 0.5 * q.side, q.side, q.side});
    }
    out.files["squares.json"] = json{{"target_mass", target}, {"max_overlap", audit.max_overlap}, {"squares", squares}}.dump(2) + "\n";
    const model::Vec2 hi = density.box_max();
    svg::Heatmap map{density.nx(), density.ny(), density.origin().x(), hi.x(), density.origin().y(), hi.y(), density.values()};
    out.files["covering_overlay.svg"] = svg::overlay_plot(map, rects, {"Calibrated squares", "x", "y", false});
    check = make_check("covering_case", audit.covered && worst <= 1.0,
                       json{{"squares", col.squares.size()}, {"max_overlap", audit.max_overlap}, {"covered", audit.covered},
                            {"max_mass_error_over_two_quadrature_errors", worst}},
                       nullptr, 0.0, "selection on the requested density");
  } catch (const std::exception& e) {
    check = make_check("covering_case", false, nullptr, nullptr, 0.0, e.what());
  }
  check.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.report.checks.push_back(check);
}

constants::ConstantLedger apply_overrides(constants::ConstantLedger ledger, const json& overrides) {
  for (const auto& [name, value] : overrides.items()) {
    if (value.is_null()) ledger.set_abstract(name, "abstract (override)");
    else if (value.is_number()) ledger.set_value(name, value.get<double>(), constants::Provenance::measured, "override");
    else throw InvalidInput("ledger override for '" + name + "' must be a number or null");
  }
  return ledger;
}

void constants_suite(const RunConfig& c, SuiteOutput& out) {
  run_ids(c, out, {12, 13});
  const auto& k = c.constants;
  constants::ChainInputs in;
  in.alpha = k.alpha;
  in.gamma = k.gamma;
  in.n_lower = k.n_lower;
  in.n_upper = k.n_upper;
  in.c1 = k.c1;
  in.c2 = k.c2;
  in.c_inner = k.c_inner;
  in.n_bar = k.n_bar;
  in.bs_shift = c.magnetic.bs_shift;
  in.bs_power = c.magnetic.bs_power;
  in.universal_c2 = k.universal_c2;
  in.overlap_b2 = k.overlap_b2;
  auto ledger = constants::build_chain(in);
  if (!k.ledger.empty()) ledger = constants::assemble_global(apply_overrides(ledger, k.ledger));
  out.report.artifacts["ledger"] = ledger.to_json();
  out.files["ledger.json"] = ledger.to_json().dump(2) + "\n";
  out.files["ledger.dot"] = ledger.to_dot();
}

}  // namespace

const std::vector<Criterion>& acceptance_criteria() { return kCriteria; }

Check run_criterion(const Criterion& criterion, const RunConfig& config, SuiteOutput& output) {
  const auto start = std::chrono::steady_clock::now();
  Check check;
  try {
    check = criterion.run(config, output);
  } catch (const std::exception& e) {
    check = make_check(criterion.name, false, nullptr, nullptr, 0.0, std::string("error: ") + e.what());
  }
  check.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return check;
}

SuiteOutput run_suite(const RunConfig& config) {
  SuiteOutput out;
  out.report.suite = config.suite;
  out.report.config = report::to_json(config);
  const std::string& s = config.suite;
  if (s == "verify-bessel") {
    bessel_suite(config, out);
  } else if (s == "verify-diamagnetic") {
    run_ids(config, out, {3, 4, 5, 6});
  } else if (s == "two-anyon") {
    two_anyon_suite(config, out);
  } else if (s == "covering") {
    covering_suite(config, out);
  } else if (s == "constants") {
    constants_suite(config, out);
  } else if (s == "all") {
    for (const auto& c : kCriteria) out.report.checks.push_back(run_criterion(c, config, out));
  } else {
    throw InvalidInput("unknown suite '" + s + "'");
  }
  if (out.report.artifacts.contains("diamagnetic") || out.report.artifacts.contains("counts")) {
    json d = json::object();
    if (out.report.artifacts.contains("diamagnetic")) d.update(out.report.artifacts["diamagnetic"]);
    if (out.report.artifacts.contains("counts")) d["counts"] = out.report.artifacts["counts"];
    out.files["diamagnetic.json"] = d.dump(2) + "\n";
  }
  return out;
}

}  // namespace anyonlt::suites
