#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "pam/initial_data.hpp"
#include "pam/path_combinatorics.hpp"

namespace pam {

/// Hurst indices of the noise (H0 in time, H in space) and the constant
/// b_{H0} of the Hardy–Littlewood–Sobolev step. Requires H0 ∈ (1/2, 1),
/// H ∈ (0, 1/2), H + H0 > 3/4 and b_{H0} > 0.
class FractionalParams {
 public:
  FractionalParams(double H0, double H, double b_H0 = 1.0);

  double H0() const noexcept { return H0_; }
  double H() const noexcept { return H_; }
  double b_H0() const noexcept { return b_; }
  double alpha_H0() const noexcept { return H0_ * (2 * H0_ - 1); }
  /// Γ(2H+1) sin(πH) / (2π)
  double c_H() const;
  /// 2H0 + H - 1, the per-chaos time exponent of E|J_n|².
  double time_exponent() const noexcept { return 2 * H0_ + H_ - 1; }

  FractionalParams with_b(double b_H0) const { return FractionalParams(H0_, H_, b_H0); }

 private:
  double H0_;
  double H_;
  double b_;
};

/// Sharp one-dimensional HLS constant times α_{H0}:
///   α_{H0} π^{3/2 - 2H0} Γ(H0 - 1/2) / Γ(H0).
/// The n-fold product form of the inequality holds with its n-th power.
double sharp_lhs_constant(double H0);

/// 5x5 grid over the admissible region used by the scans and checks.
std::vector<FractionalParams> admissible_grid();

/// α_j = (1 - 2H) a_j.
Eigen::VectorXd spatial_exponents(const ExponentVector& a, const FractionalParams& params);

struct TildeExponents {
  Eigen::VectorXd alpha_tilde;
  Eigen::VectorXd beta_tilde;
};

/// α̃_1 = (4H-3+α_1)/(4H0), α̃_j = (4H-2+α_{j-1}+α_j)/(4H0), β̃_j = -(α_j+1)/(4H0).
/// Throws ValidationError if α̃_1 <= -1 or some β̃_j <= -1.
TildeExponents tilde_exponents(const Eigen::VectorXd& alpha, const FractionalParams& params);

enum class AbConditionForm {
  AsPrinted,  ///< Σ_{i<=k}(α̃_i+β̃_i) + k + 1 + α_{k+1} > 0
  Tilde,      ///< same with α̃_{k+1}; the condition the simplex lemma needs
};

bool verify_ab_condition(const TildeExponents& tilde, const Eigen::VectorXd& alpha,
                         AbConditionForm form = AbConditionForm::Tilde);

/// θ_k = Σ_{i<=k}(α̃_i+β̃_i) + k + 1, from its closed form in a.
double theta(int k, const ExponentVector& a, const FractionalParams& params);

/// ln γ_n(a) = Σ_{k<n} [ln Γ(θ_k + (1-2H)(a_k+a_{k+1}-2)/(4H0)) - ln Γ(θ_k)].
double log_gamma_n(const ExponentVector& a, const FractionalParams& params);
double gamma_n(const ExponentVector& a, const FractionalParams& params);

/// θ_{i-1} + (1-2H)(a_{i-1}+a_i-2)/(4H0) <= θ_{i+1} for 2 <= i <= n-1.
bool verify_z_ordering(const ExponentVector& a, const FractionalParams& params);

enum class BoundMode { ExactConstants, Asymptotic };

/// Route for the sum over A_n in exact-constants mode.
enum class SumRoute {
  Enumeration,     ///< all 2^{n-1} indices in descending lexicographic order
  TransferMatrix,  ///< dynamic programme over consecutive partial-sum states
};

inline constexpr int kMaxExactTerm = 30;

struct ChaosTermBound {
  int n = 0;
  /// Exact mode: max of γ_n over A_n. Asymptotic mode: 1.
  double gamma_n = 1.0;
  /// ln of the bound on E|J_n(t,x)|² / J_0²(t,x).
  double log_bound = 0.0;
  /// n (2H0 + H - 1)
  double time_exponent = 0.0;
};

/// Exact mode:
///   b^n (n!)^{2H0-1} [Σ_{a∈A_n} t^{(α_n+1)/(4H0)} Γ(α̃_1+1) Π Γ(β̃_i+1)
///     / Γ(|α̃|+|β̃|+n+1) γ_n t^{|α̃|+|β̃|+n} (c_H^n Π Γ((1+α_j)/2))^{1/(2H0)}]^{2H0}
/// Asymptotic mode: C^n (n!)^{-H} t^{n(2H0+H-1)}.
/// n = 0 gives log_bound 0. Exact mode throws SizeError for n > 30.
ChaosTermBound term_bound(int n, double t, const FractionalParams& params, BoundMode mode,
                          double C = 1.0, SumRoute route = SumRoute::Enumeration);

struct StirlingCheck {
  bool found = false;
  /// First n from which Γ(an+1+b) >= C^n (n!)^a holds through n_max.
  int threshold = 0;
  /// min over [threshold, n_max] of ln Γ(an+1+b) - n ln C - a ln n!.
  double min_margin = 0.0;
};

/// Scans n ∈ [n_min, n_max] in log space. Requires a > 0, C > 0, an+1+b > 0.
StirlingCheck stirling_lb_check(double a, double b, double C, int n_min, int n_max);

/// Stirling gives ln Γ(an+1) - a ln n! ≈ a n ln a; half of a^a leaves room
/// for the polynomial corrections.
inline double stirling_default_C(double a) { return 0.5 * std::pow(a, a); }

struct SeriesValue {
  double log_sum = 0.0;        ///< ln Σ_{n>=0} x^n (n!)^{-H/2}
  long truncation_index = 0;   ///< last index that contributes above 1e-16
  bool laplace_route = false;  ///< peak beyond 1e5 terms: Laplace approximation
};

/// ln Σ_{n>=0} x^n / (n!)^{H/2} for x >= 0, H ∈ (0, 1).
SeriesValue log_chaos_series(double x, double H);

/// Witness C = max_{1<=n<=n_max} (K_n (n!)^H)^{1/n}, K_n the exact-constants
/// bound at t = 1. The exact bound scales as t^{n(2H0+H-1)}, so
/// K_n t^{n(2H0+H-1)} <= C^n (n!)^{-H} t^{n(2H0+H-1)} for n <= n_max.
double witness_constant(const FractionalParams& params, int n_max = kMaxExactTerm);

struct EnvelopeFit {
  double C1 = 1.0;
  double C2 = 0.0;
};

/// C2 = (H/2) C^{1/H} from the large-x form of the series; C1 is then the
/// least value for which the envelope dominates at every (t, p) given.
EnvelopeFit fit_envelope(const FractionalParams& params, double C, std::span<const double> ts,
                         std::span<const double> ps);

struct MomentBound {
  double log_series_value = 0.0;    ///< p ln(J_0 S)
  double log_envelope_value = 0.0;  ///< p ln(C1 J_0) + C2 p^{(H+1)/H} t^{(2H0+H-1)/H}
  double series_value = 0.0;        ///< exp of the above; may be inf
  double envelope_value = 0.0;
  long truncation_index = 0;
  EnvelopeFit fit;
};

/// Requires p >= 2, t > 0, C > 0.
MomentBound moment_bound(double p, double t, double x, const FractionalParams& params,
                         const InitialMeasure& measure, double C, const EnvelopeFit& fit);
/// Fits the envelope on the single point (t, p).
MomentBound moment_bound(double p, double t, double x, const FractionalParams& params,
                         const InitialMeasure& measure, double C);

struct GrowthFit {
  /// Per p: least-squares slope of ln ln S against ln t.
  std::vector<double> t_slopes;
  /// Per t: least-squares slope of ln(p ln S) against ln p.
  std::vector<double> p_slopes;
  double t_target = 0.0;  ///< (2H0+H-1)/H
  double p_target = 0.0;  ///< (H+1)/H
};

GrowthFit growth_exponents(const FractionalParams& params, double C, std::span<const double> ts,
                           std::span<const double> ps);

}  // namespace pam
