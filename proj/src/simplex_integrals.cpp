#include "pam/simplex_integrals.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "pam/errors.hpp"
#include "pam/special_functions.hpp"

namespace pam {
namespace {

double lg(double x) { return log_gamma(PositiveReal(x)); }

std::string indexed(const std::string& what, int k) {
  return what + " (k=" + std::to_string(k) + ")";
}

void require_valid(const SimplexIntegralSpec& spec) {
  if (auto bad = check_conditions(spec)) {
    throw ValidationError("simplex integral: violated " +
                          (bad->k > 0 ? indexed(bad->clause, bad->k) : bad->clause));
  }
}

// Nested tanh-sinh over the ordered simplex. Each level is rescaled to
// (0, 1) and carried in log space:
//   L_m(T) = (1 + α_m + β_m) ln T + ln ∫_0^1 u^{α_m} (1-u)^{β_m} exp(L_{m-1}(T u)) du
// so that no point evaluation overflows when T is tiny.
class NestedQuadrature {
 public:
  NestedQuadrature(const SimplexIntegralSpec& spec, double tol, std::size_t max_refinements)
      : spec_(spec), tol_(tol), integrator_(max_refinements) {}

  double run(double* outer_error) {
    return std::exp(log_level(spec_.n(), spec_.t, outer_error));
  }

 private:
  double log_level(int m, double T, double* error = nullptr) {
    if (m == 0) return 0.0;
    const double a = spec_.alphas(m - 1);
    const double b = spec_.betas(m - 1);
    auto f = [&](double u, double uc) {
      const double left = uc < 0 ? -uc : u;
      const double right = uc > 0 ? uc : 1.0 - u;
      if (!(left > 0) || !(right > 0) || !(T * left > 0)) return 0.0;
      return std::exp(a * std::log(left) + b * std::log(right) +
                      log_level(m - 1, T * left));
    };
    double err = 0.0;
    double l1 = 0.0;
    const double v = integrator_.integrate(f, 0.0, 1.0, tol_, &err, &l1);
    const double scale = (1.0 + a + b) * std::log(T);
    if (error) *error = err * std::exp(scale);
    return scale + std::log(v);
  }

  const SimplexIntegralSpec& spec_;
  double tol_;
  boost::math::quadrature::tanh_sinh<double> integrator_;
};

// Error estimate: outer quadrature error plus the change against a run at a
// 1000x looser tolerance (tanh-sinh converges fast enough that this
// over-estimates the error of the tight run).
OracleResult nested_quadrature(const SimplexIntegralSpec& spec, const OracleBudget& budget) {
  NestedQuadrature fine(spec, budget.tolerance, budget.max_refinements);
  NestedQuadrature coarse(spec, budget.tolerance * 1e3, budget.max_refinements);
  double outer_error = 0.0;
  double ignored = 0.0;
  OracleResult r;
  r.estimate = fine.run(&outer_error);
  const double rough = coarse.run(&ignored);
  r.error_bound = std::abs(r.estimate - rough) + outer_error +
                  8 * std::numeric_limits<double>::epsilon() * std::abs(r.estimate);
  // Inner levels may exhaust their refinements at points of negligible
  // weight; convergence is judged on the propagated bound instead.
  r.converged = std::isfinite(r.estimate) &&
                r.error_bound <= 1e4 * budget.tolerance * std::abs(r.estimate);
  return r;
}

// Samples the n+1 gaps (t_1, t_2 - t_1, ..., t - t_n) from a Dirichlet law
// whose shape parameters absorb the negative gap exponents.
OracleResult monte_carlo(const SimplexIntegralSpec& spec, const OracleBudget& budget) {
  const int n = spec.n();
  const double t = spec.t;
  std::vector<double> gap_exp(n + 1);
  gap_exp[0] = spec.alphas(0);
  for (int k = 1; k <= n; ++k) gap_exp[k] = spec.betas(k - 1);

  std::vector<double> shape(n + 1);
  double shape_sum = 0.0;
  double log_norm = 0.0;
  for (int k = 0; k <= n; ++k) {
    shape[k] = 1.0 + std::min(gap_exp[k], 0.0);
    shape_sum += shape[k];
    log_norm -= lg(shape[k]);
  }
  log_norm += lg(shape_sum);
  // Gap density on t·simplex w.r.t. dt_1..dt_n:
  //   exp(log_norm) Π (g_k/t)^{shape_k - 1} t^{-n}
  double log_const = -log_norm + n * std::log(t);
  for (double c : shape) log_const += (c - 1.0) * std::log(t);

  std::mt19937_64 rng(budget.seed);
  std::vector<std::gamma_distribution<double>> draws;
  for (double c : shape) draws.emplace_back(c, 1.0);

  std::vector<double> g(n + 1);
  long double sum = 0.0L;
  long double sum_sq = 0.0L;
  for (std::size_t s = 0; s < budget.samples; ++s) {
    double total = 0.0;
    for (int k = 0; k <= n; ++k) {
      g[k] = draws[k](rng);
      total += g[k];
    }
    double log_w = log_const;
    double tk = 0.0;  // t_k = g_0 + ... + g_{k-1}
    for (int k = 0; k <= n; ++k) {
      if (k >= 2) log_w += spec.alphas(k - 1) * std::log(tk);
      const double gk = t * g[k] / total;
      const double e = gap_exp[k] - (shape[k] - 1.0);
      if (e != 0.0) log_w += e * std::log(gk);
      tk += gk;
    }
    const double w = std::exp(log_w);
    if (std::isfinite(w)) {
      sum += w;
      sum_sq += static_cast<long double>(w) * w;
    }
  }
  const long double m = budget.samples;
  const long double mean = sum / m;
  const long double var = std::max(0.0L, sum_sq / m - mean * mean);
  OracleResult r;
  r.estimate = static_cast<double>(mean);
  r.error_bound = 3.0 * static_cast<double>(std::sqrt(var / m));
  r.converged = std::isfinite(r.estimate);
  return r;
}

}  // namespace

std::optional<ConditionViolation> check_conditions(const SimplexIntegralSpec& spec) {
  if (!(spec.t > 0) || !std::isfinite(spec.t)) return ConditionViolation{"t > 0", 0};
  if (spec.alphas.size() == 0 || spec.alphas.size() != spec.betas.size()) {
    return ConditionViolation{"alphas and betas have equal length n >= 1", 0};
  }
  if (!spec.alphas.allFinite() || !spec.betas.allFinite()) {
    return ConditionViolation{"finite exponents", 0};
  }
  const int n = spec.n();
  if (!(spec.alphas(0) > -1)) return ConditionViolation{"alpha_1 > -1", 1};
  for (int i = 1; i <= n; ++i) {
    if (!(spec.betas(i - 1) > -1)) return ConditionViolation{"beta_i > -1", i};
  }
  double partial = 0.0;
  for (int k = 1; k <= n - 1; ++k) {
    partial += spec.alphas(k - 1) + spec.betas(k - 1);
    if (!(partial + k + 1 + spec.alphas(k) > 0)) {
      return ConditionViolation{
          "sum_{i<=k}(alpha_i+beta_i) + k + 1 + alpha_{k+1} > 0", k};
    }
  }
  return std::nullopt;
}

double log_gaussian_spectral_integral(double alpha, double t) {
  if (!(alpha > -1) || !std::isfinite(alpha) || !(t > 0) || !std::isfinite(t)) {
    throw DomainError("gaussian_spectral_integral: need alpha > -1, t > 0");
  }
  const double h = 0.5 * (1.0 + alpha);
  return lg(h) - h * std::log(t);
}

double gaussian_spectral_integral(double alpha, double t) {
  return std::exp(log_gaussian_spectral_integral(alpha, t));
}

double log_closed_form(const SimplexIntegralSpec& spec) {
  require_valid(spec);
  const int n = spec.n();
  const double total = spec.alphas.sum() + spec.betas.sum() + n;
  double v = lg(spec.alphas(0) + 1) - lg(total + 1) + total * std::log(spec.t);
  for (int i = 0; i < n; ++i) v += lg(spec.betas(i) + 1);
  double partial = 0.0;
  for (int k = 1; k <= n - 1; ++k) {
    partial += spec.alphas(k - 1) + spec.betas(k - 1);
    v += lg(partial + k + 1 + spec.alphas(k)) - lg(partial + k + 1);
  }
  return v;
}

double closed_form(const SimplexIntegralSpec& spec) {
  return std::exp(log_closed_form(spec));
}

OracleResult brute_force(const SimplexIntegralSpec& spec, OracleMethod method,
                         const OracleBudget& budget) {
  require_valid(spec);
  if (method == OracleMethod::NestedQuadrature) {
    if (spec.n() > 3) throw SizeError("brute_force: nested quadrature needs n <= 3");
    return nested_quadrature(spec, budget);
  }
  if (spec.n() > 5) throw SizeError("brute_force: Monte Carlo needs n <= 5");
  if (budget.samples < 2) throw SizeError("brute_force: need at least 2 samples");
  return monte_carlo(spec, budget);
}

}  // namespace pam
