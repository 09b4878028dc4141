#include "anyonlt/radial.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "anyonlt/error.hpp"

namespace anyonlt::radial {

namespace {

// Number of eigenvalues of the pencil (K, M) strictly below x (Sylvester inertia of K - x M).
int count_below(const RadialMatrices& m, double x) {
  const std::size_t n = m.mass.size();
  int count = 0;
  double q = m.stiffness_diag[0] - x * m.mass[0];
  for (std::size_t i = 0;; ++i) {
    if (q == 0.0) q = -std::numeric_limits<double>::min();
    if (q < 0.0) ++count;
    if (i + 1 == n) break;
    const double b = m.stiffness_off[i];
    q = m.stiffness_diag[i + 1] - x * m.mass[i + 1] - b * b / q;
  }
  return count;
}

double bisect_eigenvalue(const RadialMatrices& m, int index, double lo, double hi) {
  // smallest x with count_below(x) > index, i.e. the (index+1)-th eigenvalue
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(m, mid) > index) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

// (K - shift M) v = rhs for tridiagonal K, diagonal M.
std::vector<double> solve_shifted(const RadialMatrices& m, double shift, const std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> c(n), d(n), x(n);
  double pivot = m.stiffness_diag[0] - shift * m.mass[0];
  if (pivot == 0.0) pivot = 1e-300;
  c[0] = (n > 1 ? m.stiffness_off[0] : 0.0) / pivot;
  d[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    const double a = m.stiffness_off[i - 1];
    pivot = m.stiffness_diag[i] - shift * m.mass[i] - a * c[i - 1];
    if (pivot == 0.0) pivot = 1e-300;
    c[i] = (i + 1 < n ? m.stiffness_off[i] : 0.0) / pivot;
    d[i] = (rhs[i] - a * d[i - 1]) / pivot;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

struct Solved {
  double lambda;
  std::vector<double> vector;
};

Solved solve_discrete(double nu, double gamma, const RadialOptions& options, int points, bool want_vector,
                      RadialMatrices* out_matrices) {
  RadialMatrices m = assemble_radial(nu, gamma, points);
  const int zero_modes = count_below(m, options.positivity_threshold);
  if (count_below(m, options.window_max) <= zero_modes) {
    std::ostringstream msg;
    msg << "no positive eigenvalue below " << options.window_max << " for nu=" << nu << ", gamma=" << gamma;
    throw WindowExhausted(msg.str());
  }
  const double lambda = bisect_eigenvalue(m, zero_modes, options.positivity_threshold, options.window_max);
  Solved s{lambda, {}};
  if (want_vector) {
    const std::size_t n = m.mass.size();
    std::vector<double> v(n, 1.0);
    const double shift = lambda - 1e-9 * std::max(1.0, lambda);
    for (int it = 0; it < 4; ++it) {
      std::vector<double> rhs(n);
      for (std::size_t i = 0; i < n; ++i) rhs[i] = m.mass[i] * v[i];
      v = solve_shifted(m, shift, rhs);
      double norm2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) norm2 += m.mass[i] * v[i] * v[i];
      const double sign = v[n - 1] < 0.0 ? -1.0 : 1.0;
      const double scale = sign / std::sqrt(norm2);
      for (auto& vi : v) vi *= scale;
    }
    s.vector = std::move(v);
  }
  if (out_matrices) *out_matrices = std::move(m);
  return s;
}

}  // namespace

RadialMatrices assemble_radial(double nu, double gamma, int grid_points) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) throw InvalidInput("grid assembly needs 0 < gamma < 1");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidInput("nu must be nonnegative");
  if (grid_points < 16) throw InvalidInput("at least 16 grid points are required");

  // Uniform grid in s = log r: the form  int (u_s^2 + nu^2 u^2) ds  over the
  // mass  int u^2 r^2 ds = int u^2 r dr, with natural (Neumann) ends.
  const std::size_t n = static_cast<std::size_t>(grid_points);
  const double s0 = std::log(gamma);
  const double ds = -s0 / static_cast<double>(n - 1);
  RadialMatrices m;
  m.radii.resize(n);
  m.mass.resize(n);
  m.stiffness_diag.assign(n, 0.0);
  m.stiffness_off.assign(n - 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = (i + 1 == n) ? 0.0 : s0 + ds * static_cast<double>(i);
    const double r = std::exp(s);
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    m.radii[i] = r;
    m.mass[i] = w * ds * r * r;
    m.stiffness_diag[i] += w * ds * nu * nu;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    m.stiffness_diag[i] += 1.0 / ds;
    m.stiffness_diag[i + 1] += 1.0 / ds;
    m.stiffness_off[i] = -1.0 / ds;
  }
  return m;
}

RadialEigenResult g_squared(double nu, double gamma, const RadialOptions& options) {
  if (!(gamma > 0.0) || std::isnan(gamma)) throw InvalidInput("gamma must be positive");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidInput("nu must be nonnegative");
  RadialEigenResult result;
  if (gamma >= 1.0) {
    result.plateau = true;
    result.g = nu;
    result.lambda_min_positive = nu * nu;
    return result;
  }
  RadialMatrices m;
  Solved fine = solve_discrete(nu, gamma, options, options.grid_points, true, &m);
  result.lambda_min_positive = fine.lambda;
  result.g = std::sqrt(fine.lambda);
  result.radii = std::move(m.radii);
  result.eigenfunction = std::move(fine.vector);
  if (options.estimate_refinement) {
    const Solved finer = solve_discrete(nu, gamma, options, 2 * options.grid_points - 1, false, nullptr);
    result.refinement_estimate = std::abs(finer.lambda - fine.lambda) / 3.0;
  }
  return result;
}

double bessel_j_prime(double nu, double x) {
  if (!(nu >= 0.0)) throw InvalidInput("nu must be nonnegative");
  if (!(x > 0.0)) throw InvalidInput("x must be positive");
  // J_nu'(x) = sum_k (-1)^k (2k+nu)/2 (x/2)^(2k+nu-1) / (k! Gamma(k+nu+1))
  const long double half = static_cast<long double>(x) / 2.0L;
  long double term = std::exp((nu - 1.0) * std::log(static_cast<double>(half)) - std::lgamma(nu + 1.0));
  long double sum = 0.0L;
  for (int k = 0; k < 500; ++k) {
    const long double contribution = term * (2.0L * k + nu) / 2.0L;
    sum += (k % 2 == 0) ? contribution : -contribution;
    if (k > x && std::abs(contribution) < 1e-22L * std::max(std::abs(sum), 1e-300L)) break;
    term *= half * half / ((k + 1.0L) * (k + 1.0L + nu));
  }
  return static_cast<double>(sum);
}

double bessel_jprime_zero(double nu) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw InvalidInput("nu must be nonnegative");
  if (nu > 30.0) throw InvalidInput("series evaluation is limited to nu <= 30");
  // Sign-equivalent form J_nu'(x) (x/2)^(1-nu), finite at the origin.
  auto f = [nu](double x) {
    const long double half = static_cast<long double>(x) / 2.0L;
    long double term = std::exp(-std::lgamma(nu + 1.0));
    long double sum = 0.0L;
    for (int k = 0; k < 500; ++k) {
      const long double contribution = term * (2.0L * k + nu) / 2.0L;
      sum += (k % 2 == 0) ? contribution : -contribution;
      if (k > x && std::abs(contribution) < 1e-22L * std::max(std::abs(sum), 1e-300L)) break;
      term *= half * half / ((k + 1.0L) * (k + 1.0L + nu));
    }
    return static_cast<double>(sum);
  };
  const double step = 0.01;
  double lo = step;
  double flo = f(lo);
  // for nu = 0 the series starts at exactly 0 (the excluded zero); move off it
  const double limit = nu + 20.0;
  double hi = lo;
  double fhi = flo;
  bool bracketed = false;
  for (double x = lo + step; x <= limit; x += step) {
    const double fx = f(x);
    if ((flo < 0.0) != (fx < 0.0) && flo != 0.0) {
      hi = x;
      fhi = fx;
      bracketed = true;
      break;
    }
    lo = x;
    flo = fx;
  }
  if (!bracketed) {
    std::ostringstream msg;
    msg << "no sign change of J_nu' on [" << step << ", " << limit << "] for nu=" << nu;
    throw NumericError(msg.str());
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  (void)fhi;
  return 0.5 * (lo + hi);
}

double alpha_fraction(int particle_count, double alpha) {
  if (particle_count < 2) throw InvalidInput("alpha_N needs N >= 2");
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw InvalidInput("alpha must lie in [0, 2]");
  double best = std::numeric_limits<double>::infinity();
  for (int p = 0; p <= particle_count - 2; ++p) {
    const double t = (2.0 * p + 1.0) * (1.0 - alpha);
    best = std::min(best, std::abs(t - 2.0 * std::round(t / 2.0)));
  }
  return best;
}

double e2_lower_constant(double alpha, double gamma, double c_inner, const RadialOptions& options) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw InvalidInput("alpha must lie in [0, 2]");
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be nonnegative");
  if (!(c_inner > 0.0)) throw InvalidInput("c_inner must be positive");
  const double inner = 12.0 * gamma;
  if (inner >= 1.0) return 0.0;
  const double nu = c_inner * alpha_fraction(2, alpha);
  // order zero: the constant function is admissible, the bound is its zero energy
  if (nu == 0.0) return 0.0;
  double g2;
  if (inner == 0.0) {
    const double j = bessel_jprime_zero(nu);
    g2 = j * j;
  } else {
    RadialOptions opts = options;
    opts.estimate_refinement = false;
    g2 = g_squared(nu, inner, opts).lambda_min_positive;
  }
  const double gap = 1.0 - inner;
  return std::numbers::pi / 48.0 * g2 * gap * gap * gap;
}

}  // namespace anyonlt::radial
