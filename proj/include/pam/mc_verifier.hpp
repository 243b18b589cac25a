#pragma once

#include <cstdint>
#include <span>

#include "pam/chaos_bounds.hpp"
#include "pam/initial_data.hpp"

namespace pam {

/// Space-time covariance of the noise: α_{H0}|t-s|^{2H0-2} in time and
/// μ(dξ) = c_H |ξ|^{1-2H} dξ in space (d = 1).
struct NoiseSpec {
  FractionalParams params;

  double spectral_weight(double xi) const;
  double temporal_weight(double dt) const;
};

struct McBudget {
  long samples = 200000;
  int workers = 1;
  /// Results whose stderr exceeds this fraction of |mean| are flagged.
  double target_rel_stderr = 0.05;
};

struct EstimatorResult {
  double mean = 0.0;
  double stderr = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  bool flagged = false;
};

/// f_n = Π_{j<=n} G(t_{j+1}-t_j, x_{j+1}-x_j) J_0(t_1, x_1) 1{0<t_1<...<t_n<t},
/// with t_{n+1} = t, x_{n+1} = x. Throws DomainError for t <= 0 or size mismatch.
double kernel_f_n(std::span<const double> times, std::span<const double> points, double t,
                  double x, const InitialMeasure& measure);

/// α_{H0}^n / n!: the factor in E|J_n|² = (α^n/n!) ∫∫ Π|t_j-s_j|^{2H0-2} ψ(t,s) dt ds.
/// See docs/chaos_norm_factors.md.
double chaos_norm_prefactor(int n, const FractionalParams& params);

/// How F f̃_n(t_1..t_n; ξ) is obtained.
enum class KernelRoute {
  /// Symmetric bridge covariance evaluated at unsorted times; ψ carries (n!)²/(n!)².
  BridgeCovariance,
  /// Sort the times, invert the tridiagonal precision of the Gaussian chain,
  /// permute back, and assemble n! ||f̃_n||² with the 1/n! of the symmetrization explicit.
  SortedChain,
};

/// Unbiased estimate of E|J_n(t,x)|² = n! ||f̃_n||² for n ∈ {1,2}.
/// Measures: DiracAt, GaussianDensity, LebesgueConstant (DomainError otherwise).
/// Deterministic in (seed, samples); independent of the worker count.
EstimatorResult chaos_norm_estimate(int n, double t, double x, const FractionalParams& params,
                                    const InitialMeasure& measure, const McBudget& budget,
                                    std::uint64_t seed,
                                    KernelRoute route = KernelRoute::BridgeCovariance);

/// ψ^{(n)}_{t,x}(t, s) by Monte Carlo over ξ (exact for n = 1).
EstimatorResult psi_estimate(std::span<const double> ts, std::span<const double> ss, double t,
                             double x, const FractionalParams& params,
                             const InitialMeasure& measure, const McBudget& budget,
                             std::uint64_t seed);

struct Lemma32Check {
  EstimatorResult lhs;  ///< ψ(t, t)
  EstimatorResult rhs;  ///< J_0² ∫ Π exp{-(t_{k+1}-t_k)/(t_{k+1}t_k) |Σ_{j<=k} t_j ξ_j|²} μ(dξ)
  double diff_stderr = 0.0;
  bool pass = false;  ///< lhs <= rhs + 3 diff_stderr (+1e-12 relative rounding slack)
};

/// Both sides from common ξ draws. times must satisfy 0 < t_1 < ... < t_n < t.
Lemma32Check verify_lemma32(int n, std::span<const double> ordered_times, double t, double x,
                            const FractionalParams& params, const InitialMeasure& measure,
                            const McBudget& budget, std::uint64_t seed);

struct TermBoundCheck {
  EstimatorResult estimate;
  double bound = 0.0;  ///< J_0² times the exact-constants term bound with params.b_H0()
  double b_H0 = 0.0;
  /// Least b_{H0} for which the check passes; the bound scales as b^n.
  double b_min = 0.0;
  bool pass = false;  ///< estimate <= bound + 3 stderr
};

TermBoundCheck verify_term_bound(int n, double t, double x, const FractionalParams& params,
                                 const InitialMeasure& measure, const McBudget& budget,
                                 std::uint64_t seed);

}  // namespace pam
