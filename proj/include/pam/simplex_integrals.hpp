#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>

namespace pam {

/// Integrand exponents for
///   I_n(t) = ∫_{0<t_1<...<t_n<t} Π t_i^{α_i} (t_{i+1} - t_i)^{β_i} dt,  t_{n+1} = t.
struct SimplexIntegralSpec {
  double t = 1.0;
  Eigen::VectorXd alphas;
  Eigen::VectorXd betas;

  int n() const { return static_cast<int>(alphas.size()); }
};

/// First failed admissibility clause. `k` is the index the clause refers to
/// (1-based), or 0 for clauses without an index.
struct ConditionViolation {
  std::string clause;
  int k = 0;
};

/// Full diagnosis; nullopt means the integral converges and closed_form
/// applies.
std::optional<ConditionViolation> check_conditions(const SimplexIntegralSpec& spec);

/// ∫_R exp(-t ξ²) |ξ|^α dξ = Γ((1+α)/2) t^{-(1+α)/2}, α > -1, t > 0.
double gaussian_spectral_integral(double alpha, double t);
double log_gaussian_spectral_integral(double alpha, double t);

/// ln I_n(t) via a product of gamma ratios. Throws ValidationError naming
/// the failed clause (and its k) when check_conditions reports one.
double log_closed_form(const SimplexIntegralSpec& spec);
double closed_form(const SimplexIntegralSpec& spec);

enum class OracleMethod { NestedQuadrature, MonteCarlo };

struct OracleBudget {
  double tolerance = 1e-10;       // per-level tanh-sinh tolerance
  std::size_t max_refinements = 12;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
};

struct OracleResult {
  double estimate = 0.0;
  /// Quadrature: a posteriori estimate. Monte Carlo: 3 standard errors.
  double error_bound = 0.0;
  bool converged = true;
};

/// Independent numerical evaluation of I_n(t). Nested quadrature supports
/// n <= 3, Monte Carlo n <= 5 (SizeError otherwise).
OracleResult brute_force(const SimplexIntegralSpec& spec, OracleMethod method,
                         const OracleBudget& budget = {});

}  // namespace pam
