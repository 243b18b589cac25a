#include "pam/chaos_bounds.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gtest/gtest.h"
#include "pam/errors.hpp"
#include "pam/simplex_integrals.hpp"
#include "pam/special_functions.hpp"

namespace pam {
namespace {

// Summand of the exact bound for one a, assembled from tilde exponents and
// the simplex closed form rather than the step tables.
double log_summand(const ExponentVector& a, double t, const FractionalParams& p) {
  const Eigen::VectorXd alpha = spatial_exponents(a, p);
  const auto tilde = tilde_exponents(alpha, p);
  SimplexIntegralSpec spec{t, tilde.alpha_tilde, tilde.beta_tilde};
  double v = (alpha(alpha.size() - 1) + 1) / (4 * p.H0()) * std::log(t) + log_closed_form(spec);
  double spectral = a.size() * std::log(p.c_H());
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    spectral += std::lgamma(0.5 * (1 + alpha(j)));
  }
  return v + spectral / (2 * p.H0());
}

double oracle_log_bound(int n, double t, const FractionalParams& p) {
  double acc = -INFINITY;
  for (const auto& a : enumerate_exponent_vectors(n)) acc = log_add_exp(acc, log_summand(a, t, p));
  return n * std::log(p.b_H0()) + (2 * p.H0() - 1) * std::lgamma(n + 1.0) + 2 * p.H0() * acc;
}

TEST(FractionalParams, DerivedConstants) {
  const FractionalParams p(0.75, 0.25);
  EXPECT_DOUBLE_EQ(p.alpha_H0(), 0.375);
  EXPECT_NEAR(p.c_H(), std::tgamma(1.5) * std::sin(std::numbers::pi / 4) / (2 * std::numbers::pi),
              1e-15);
  EXPECT_EQ(p.b_H0(), 1.0);
  EXPECT_NEAR(p.time_exponent(), 0.75, 1e-15);
}

TEST(FractionalParams, Validation) {
  EXPECT_THROW(FractionalParams(0.6, 0.1), ValidationError);
  EXPECT_THROW(FractionalParams(0.5, 0.3), ValidationError);
  EXPECT_THROW(FractionalParams(1.0, 0.3), ValidationError);
  EXPECT_THROW(FractionalParams(0.8, 0.5), ValidationError);
  EXPECT_THROW(FractionalParams(0.8, 0.0), ValidationError);
  EXPECT_THROW(FractionalParams(0.8, 0.3, 0.0), ValidationError);
  EXPECT_EQ(admissible_grid().size(), 25u);
}

TEST(SharpLhsConstant, KnownValues) {
  const double want = 0.375 * boost::math::tgamma(0.25) / boost::math::tgamma(0.75);
  EXPECT_NEAR(sharp_lhs_constant(0.75), want, 1e-13);
  EXPECT_NEAR(sharp_lhs_constant(0.75), 1.1095, 1e-4);
}

// One-dimensional HLS with the sharp constant on indicator functions.
TEST(SharpLhsConstant, DominatesIndicatorQuadraticForm) {
  for (double H0 : {0.6, 0.75, 0.9}) {
    for (double len : {0.5, 1.0, 3.0}) {
      // α ∫_0^L ∫_0^L |t-s|^{2H0-2} = α 2 L^{2H0} / ((2H0-1) 2H0) = L^{2H0}.
      const double lhs = std::pow(len, 2 * H0);
      const double rhs = sharp_lhs_constant(H0) * std::pow(len, 2 * H0);
      EXPECT_LE(lhs, rhs) << H0;
    }
  }
}

TEST(SpatialExponents, Examples) {
  const FractionalParams p(0.75, 0.25);
  EXPECT_TRUE(spatial_exponents(ExponentVector({1, 1}), p).isApprox(Eigen::Vector2d(0.5, 0.5)));
  EXPECT_TRUE(spatial_exponents(ExponentVector({2, 0}), p).isApprox(Eigen::Vector2d(1.0, 0.0)));
  const FractionalParams p3(0.75, 0.3);
  Eigen::Vector4d want(0.8, 0.4, 0.4, 0.0);
  EXPECT_TRUE(spatial_exponents(ExponentVector({2, 1, 1, 0}), p3).isApprox(want, 1e-15));
}

TEST(TildeExponents, HandEvaluation) {
  const FractionalParams p(0.75, 0.25);
  const auto tilde = tilde_exponents(Eigen::Vector2d(0.5, 0.5), p);
  // α̃_1 = (1 - 3 + 0.5)/3, α̃_2 = (1 - 2 + 1)/3, β̃ = -(1.5)/3
  EXPECT_NEAR(tilde.alpha_tilde(0), -0.5, 1e-15);
  EXPECT_NEAR(tilde.alpha_tilde(1), 0.0, 1e-15);
  EXPECT_NEAR(tilde.beta_tilde(0), -0.5, 1e-15);
  EXPECT_NEAR(tilde.beta_tilde(1), -0.5, 1e-15);
}

TEST(TildeExponents, BetaBoundaryAndAllOnes) {
  for (const auto& p : admissible_grid()) {
    const double top = 2 * (1 - 2 * p.H());
    const double beta = -(top + 1) / (4 * p.H0());
    EXPECT_NEAR(beta, -(3 - 4 * p.H()) / (4 * p.H0()), 1e-15);
    EXPECT_GT(beta, -1);
    const auto ones = ExponentVector(std::vector<int>(6, 1));
    const auto tilde = tilde_exponents(spatial_exponents(ones, p), p);
    const double want = -(2 - 2 * p.H()) / (4 * p.H0());
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(tilde.beta_tilde(j), want, 1e-15);
  }
}

TEST(AbCondition, HoldsOverEnumerationAndGrid) {
  for (const auto& p : admissible_grid()) {
    for (int n = 1; n <= 10; ++n) {
      for (const auto& a : enumerate_exponent_vectors(n)) {
        const auto alpha = spatial_exponents(a, p);
        const auto tilde = tilde_exponents(alpha, p);
        ASSERT_TRUE(verify_ab_condition(tilde, alpha, AbConditionForm::Tilde)) << a.digits();
        ASSERT_TRUE(verify_ab_condition(tilde, alpha, AbConditionForm::AsPrinted)) << a.digits();
      }
    }
  }
}

TEST(AbCondition, DetectsViolation) {
  TildeExponents tilde{Eigen::Vector2d(-0.9, -3.0), Eigen::Vector2d(-0.9, 0.0)};
  EXPECT_FALSE(verify_ab_condition(tilde, Eigen::Vector2d(0, 0), AbConditionForm::Tilde));
  EXPECT_TRUE(verify_ab_condition(tilde, Eigen::Vector2d(0, 0), AbConditionForm::AsPrinted));
}

TEST(Theta, FirstValueRecurrenceAndTildeSums) {
  for (const auto& p : admissible_grid()) {
    for (const auto& a : enumerate_exponent_vectors(9)) {
      EXPECT_NEAR(theta(1, a, p), (p.H() - 1) / p.H0() + 2, 1e-15);
      const auto tilde = tilde_exponents(spatial_exponents(a, p), p);
      double partial = 0.0;
      for (int k = 1; k <= a.size(); ++k) {
        partial += tilde.alpha_tilde(k - 1) + tilde.beta_tilde(k - 1);
        EXPECT_NEAR(theta(k, a, p), partial + k + 1, 1e-12);
        if (k >= 2) {
          const double step = (4 * p.H0() + 4 * p.H() - 3) / (4 * p.H0()) +
                              (1 - 2 * p.H()) / (4 * p.H0()) * a.at(k - 1);
          EXPECT_NEAR(theta(k, a, p) - theta(k - 1, a, p), step, 1e-12);
        }
      }
    }
  }
}

// γ_n equals the simplex closed form divided by its leading gamma factors.
TEST(GammaN, MatchesSimplexClosedForm) {
  for (const auto& p : {FractionalParams(0.75, 0.3), FractionalParams(0.95, 0.2)}) {
    for (int n = 1; n <= 8; ++n) {
      for (const auto& a : enumerate_exponent_vectors(n)) {
        const auto tilde = tilde_exponents(spatial_exponents(a, p), p);
        SimplexIntegralSpec spec{1.0, tilde.alpha_tilde, tilde.beta_tilde};
        double lead = std::lgamma(tilde.alpha_tilde(0) + 1) -
                      std::lgamma(tilde.alpha_tilde.sum() + tilde.beta_tilde.sum() + n + 1);
        for (int j = 0; j < n; ++j) lead += std::lgamma(tilde.beta_tilde(j) + 1);
        EXPECT_NEAR(log_gamma_n(a, p), log_closed_form(spec) - lead, 1e-11) << a.digits();
      }
    }
  }
}

TEST(GammaN, AllOnesIsOne) {
  for (const auto& p : admissible_grid()) {
    for (int n = 1; n <= 12; ++n) {
      EXPECT_NEAR(gamma_n(ExponentVector(std::vector<int>(n, 1)), p), 1.0, 1e-12);
    }
  }
}

// Interior moves (2 <= i <= n-2) shift a_{i-1}+a_i up and a_{i+1}+a_{i+2}
// down; these always decrease γ_n.
TEST(GammaN, InteriorMovesDecrease) {
  for (const auto& p : admissible_grid()) {
    for (int n = 3; n <= 10; ++n) {
      for (const auto& a : enumerate_exponent_vectors(n)) {
        const double g = gamma_n(a, p);
        for (int i : diagonal_touch_points(a)) {
          if (i < 2 || i > n - 2) continue;
          EXPECT_LE(gamma_n(move_down(a, i), p), g + 1e-12) << a.digits() << " i=" << i;
        }
      }
    }
  }
}

// Pins the counterexamples to the global bound γ_n <= 1: moves at the first
// index or at the endpoint can increase γ_n.
TEST(GammaN, BoundaryMovesCanIncrease) {
  const FractionalParams p(0.8, 0.3);
  const double g = gamma_n(ExponentVector({1, 1, 2, 0}), p);
  EXPECT_NEAR(g, 1.0313702967764304, 1e-12);
  EXPECT_GT(g, gamma_n(ExponentVector({1, 1, 1, 1}), p));
  const FractionalParams q(0.6, 0.2);
  EXPECT_NEAR(gamma_n(ExponentVector({2, 0, 1}), q), 1.1032626513208368, 1e-12);
  // n = 2: both elements of A_2 give exactly 1.
  EXPECT_NEAR(gamma_n(ExponentVector({2, 0}), p), 1.0, 1e-15);
}

TEST(GammaN, DirectProductForm) {
  const FractionalParams p(0.7, 0.4);
  const ExponentVector a({2, 0, 2, 0, 1});
  const double c = (1 - 2 * p.H()) / (4 * p.H0());
  double want = 1.0;
  for (int k = 1; k <= 4; ++k) {
    const double th = theta(k, a, p);
    want *= boost::math::tgamma(th + c * (a.at(k) + a.at(k + 1) - 2)) / boost::math::tgamma(th);
  }
  EXPECT_NEAR(gamma_n(a, p), want, 1e-13);
}

TEST(ZOrdering, HoldsOverEnumerationAndGrid) {
  for (const auto& p : admissible_grid()) {
    for (int n = 3; n <= 10; ++n) {
      for (const auto& a : enumerate_exponent_vectors(n)) {
        ASSERT_TRUE(verify_z_ordering(a, p)) << a.digits();
      }
    }
  }
}

TEST(TermBound, ExactMatchesPerIndexOracle) {
  for (const auto& p : {FractionalParams(0.75, 0.3), FractionalParams(0.85, 0.2, 1.083),
                        FractionalParams(0.6, 0.45)}) {
    for (double t : {0.5, 1.0, 2.0}) {
      for (int n = 1; n <= 10; ++n) {
        const double want = oracle_log_bound(n, t, p);
        for (auto route : {SumRoute::Enumeration, SumRoute::TransferMatrix}) {
          const auto got = term_bound(n, t, p, BoundMode::ExactConstants, 1.0, route);
          EXPECT_NEAR(got.log_bound, want, 1e-10 * (1 + std::abs(want)))
              << "n=" << n << " t=" << t;
          EXPECT_NEAR(got.time_exponent, n * p.time_exponent(), 1e-15);
        }
      }
    }
  }
}

TEST(TermBound, GammaFieldIsMaximumOverIndices) {
  const FractionalParams p(0.8, 0.3);
  for (int n = 1; n <= 9; ++n) {
    double best = 0.0;
    for (const auto& a : enumerate_exponent_vectors(n)) best = std::max(best, gamma_n(a, p));
    EXPECT_NEAR(term_bound(n, 1.0, p, BoundMode::ExactConstants).gamma_n, best, 1e-12);
  }
}

TEST(TermBound, RoutesAgreeForLargeN) {
  const FractionalParams p(0.9, 0.25);
  for (int n : {15, 20, 22}) {
    const auto e = term_bound(n, 1.7, p, BoundMode::ExactConstants, 1.0, SumRoute::Enumeration);
    const auto d = term_bound(n, 1.7, p, BoundMode::ExactConstants, 1.0, SumRoute::TransferMatrix);
    EXPECT_NEAR(e.log_bound, d.log_bound, 1e-10 * std::abs(d.log_bound)) << n;
  }
}

TEST(TermBound, TimeScalingIsExact) {
  const FractionalParams p(0.7, 0.35);
  for (int n = 1; n <= 12; ++n) {
    const double at1 = term_bound(n, 1.0, p, BoundMode::ExactConstants).log_bound;
    const double at3 = term_bound(n, 3.0, p, BoundMode::ExactConstants).log_bound;
    EXPECT_NEAR(at3 - at1, n * p.time_exponent() * std::log(3.0), 1e-10 * (1 + std::abs(at3)));
  }
}

// n = 1: a = (1), the bound is b (c_H Γ(1-H))^{... } times one simplex
// integral, here evaluated by quadrature.
TEST(TermBound, SingleChaosAgainstQuadrature) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  for (const auto& p : admissible_grid()) {
    const double t = 1.3;
    const double alpha = 1 - 2 * p.H();
    const double q = 0.25 / p.H0();
    const double at = (4 * p.H() - 3 + alpha) * q;
    const double bt = -(alpha + 1) * q;
    auto f = [&](double s, double sc) {
      const double right = sc > 0 ? sc : t - s;
      return std::pow(s, at) * std::pow(right, bt);
    };
    const double simplex = integrator.integrate(f, 0.0, t, 1e-13);
    const double inner = std::pow(t, (alpha + 1) * q) * simplex *
                         std::pow(p.c_H() * std::tgamma(0.5 * (1 + alpha)), 2 * q);
    const double want = p.b_H0() * std::pow(inner, 2 * p.H0());
    const double got = std::exp(term_bound(1, t, p, BoundMode::ExactConstants).log_bound);
    EXPECT_NEAR(got, want, 1e-9 * want);
  }
}

TEST(TermBound, NondecreasingInT) {
  const FractionalParams p(0.8, 0.3);
  for (int n = 0; n <= 8; ++n) {
    double prev = -INFINITY;
    for (double t = 0.1; t <= 10; t *= 1.5) {
      const double v = term_bound(n, t, p, BoundMode::ExactConstants).log_bound;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(TermBound, AsymptoticMode) {
  const FractionalParams p(0.8, 0.3);
  EXPECT_EQ(term_bound(0, 2.0, p, BoundMode::Asymptotic, 3.0).log_bound, 0.0);
  const auto b = term_bound(5, 2.0, p, BoundMode::Asymptotic, 3.0);
  EXPECT_NEAR(b.log_bound,
              5 * std::log(3.0) - 0.3 * std::lgamma(6.0) + 5 * 0.9 * std::log(2.0), 1e-12);
  EXPECT_EQ(b.gamma_n, 1.0);
  EXPECT_NEAR(b.time_exponent, 4.5, 1e-15);
}

TEST(TermBound, Errors) {
  const FractionalParams p(0.8, 0.3);
  EXPECT_THROW(term_bound(31, 1.0, p, BoundMode::ExactConstants), SizeError);
  EXPECT_THROW(term_bound(2, 0.0, p, BoundMode::ExactConstants), DomainError);
  EXPECT_THROW(term_bound(-1, 1.0, p, BoundMode::Asymptotic), DomainError);
}

TEST(Stirling, Examples) {
  auto eq = stirling_lb_check(1.0, 0.0, 1.0, 1, 500);
  EXPECT_TRUE(eq.found);
  EXPECT_EQ(eq.threshold, 1);
  const FractionalParams p(0.75, 0.25);
  const double a = p.time_exponent() / (2 * p.H0());
  const double b = -(1 - p.H()) / (2 * p.H0());
  auto r = stirling_lb_check(a, b, 0.5, 1, 200);
  EXPECT_TRUE(r.found);
  EXPECT_LT(r.threshold, 200);
  EXPECT_GE(r.min_margin, 0.0);
  auto fail = stirling_lb_check(0.5, 0.0, 2.0, 1, 500);
  EXPECT_FALSE(fail.found);
}

TEST(Stirling, DefaultConstantWorksOnGrid) {
  for (const auto& p : admissible_grid()) {
    const double a = p.time_exponent() / (2 * p.H0());
    const double b = -(1 - p.H()) / (2 * p.H0());
    const auto r = stirling_lb_check(a, b, stirling_default_C(a), 1, 500);
    EXPECT_TRUE(r.found);
    EXPECT_LT(r.threshold, 500);
  }
}

double naive_log_series(double x, double H, long terms) {
  long double acc = 0.0L;
  long double peak = -INFINITY;
  std::vector<long double> logs;
  for (long n = 0; n < terms; ++n) {
    const long double v = n * std::log((long double)x) - 0.5L * H * std::lgamma((long double)n + 1);
    logs.push_back(v);
    peak = std::max(peak, v);
  }
  for (auto v : logs) acc += std::exp(v - peak);
  return static_cast<double>(peak + std::log(acc));
}

TEST(ChaosSeries, DirectRouteMatchesNaive) {
  for (double H : {0.2, 0.3, 0.45}) {
    for (double x : {0.1, 1.0, 2.5}) {
      const auto s = log_chaos_series(x, H);
      EXPECT_FALSE(s.laplace_route);
      EXPECT_NEAR(s.log_sum, naive_log_series(x, H, s.truncation_index + 2000),
                  1e-12 * (1 + s.log_sum));
    }
  }
  EXPECT_EQ(log_chaos_series(0.0, 0.3).log_sum, 0.0);
}

TEST(ChaosSeries, LaplaceRouteMatchesLongSum) {
  const double H = 0.4;
  const double x = std::pow(3.0e5, H / 2);  // peak near 3e5 terms
  const auto s = log_chaos_series(x, H);
  EXPECT_TRUE(s.laplace_route);
  const double want = naive_log_series(x, H, 500000);
  EXPECT_NEAR(s.log_sum, want, 1e-6 * want);
}

TEST(ChaosSeries, IncreasingInX) {
  double prev = -1;
  for (double x = 0.1; x < 1e4; x *= 1.3) {
    const double v = log_chaos_series(x, 0.3).log_sum;
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(MomentBound, SmallTimeLimitForDirac) {
  const FractionalParams p(0.8, 0.3);
  const double C = witness_constant(p, 10);
  for (double t : {1e-4, 1e-6, 1e-8}) {
    const auto m = moment_bound(2.0, t, 0.0, p, DiracAt{0.0}, C);
    const double log_j0 = std::log(j0(t, 0.0, DiracAt{0.0}));
    EXPECT_NEAR(m.log_series_value - 2 * log_j0, 0.0, 10 * std::sqrt(C) * std::pow(t, 0.45));
  }
}

TEST(MomentBound, EnvelopeDominatesOnGrid) {
  const FractionalParams p(0.8, 0.3);
  const double C = witness_constant(p, 12);
  const std::vector<double> ts{1, 3, 10, 30, 100};
  const std::vector<double> ps{2, 4, 8, 16, 32};
  const auto fit = fit_envelope(p, C, ts, ps);
  EXPECT_GT(fit.C1, 0);
  EXPECT_NEAR(fit.C2, 0.15 * std::pow(C, 1 / 0.3), 1e-12 * fit.C2);
  for (double t : ts) {
    for (double pp : ps) {
      const auto m = moment_bound(pp, t, 0.5, p, LebesgueConstant{2.0}, C, fit);
      EXPECT_GE(m.log_envelope_value, m.log_series_value - 1e-9 * std::abs(m.log_series_value));
    }
  }
}

TEST(MomentBound, SeriesUsesJ0Power) {
  const FractionalParams p(0.8, 0.3);
  const auto a = moment_bound(3.0, 2.0, 0.0, p, LebesgueConstant{1.0}, 2.0);
  const auto b = moment_bound(3.0, 2.0, 0.0, p, LebesgueConstant{5.0}, 2.0);
  EXPECT_NEAR(b.log_series_value - a.log_series_value, 3 * std::log(5.0), 1e-12);
}

TEST(Witness, DominatesExactTerms) {
  const FractionalParams p(0.75, 0.3, sharp_lhs_constant(0.75));
  const double C = witness_constant(p, 15);
  for (int n = 1; n <= 15; ++n) {
    const auto exact = term_bound(n, 2.0, p, BoundMode::ExactConstants);
    const auto asym = term_bound(n, 2.0, p, BoundMode::Asymptotic, C);
    EXPECT_LE(exact.log_bound, asym.log_bound + 1e-9) << n;
  }
}

TEST(GrowthExponents, TimeSlopeNearTarget) {
  const FractionalParams p(0.8, 0.3);
  const double C = witness_constant(p, 12);
  const std::vector<double> ts{1, 2, 5, 10, 20, 50, 100};
  const std::vector<double> ps{2, 4, 8, 16, 32};
  const auto g = growth_exponents(p, C, ts, ps);
  EXPECT_NEAR(g.t_target, 0.9 / 0.3, 1e-12);
  EXPECT_NEAR(g.p_target, 1.3 / 0.3, 1e-12);
  ASSERT_EQ(g.t_slopes.size(), ps.size());
  ASSERT_EQ(g.p_slopes.size(), ts.size());
  for (double s : g.t_slopes) EXPECT_GT(s, 0);
}

}  // namespace
}  // namespace pam
