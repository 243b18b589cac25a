#include "pam/simplex_integrals.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "gtest/gtest.h"
#include "pam/errors.hpp"

namespace pam {
namespace {

SimplexIntegralSpec make(double t, std::vector<double> a, std::vector<double> b) {
  SimplexIntegralSpec s;
  s.t = t;
  s.alphas = Eigen::Map<Eigen::VectorXd>(a.data(), a.size());
  s.betas = Eigen::Map<Eigen::VectorXd>(b.data(), b.size());
  return s;
}

SimplexIntegralSpec random_spec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> first(-0.9, 1.5);
  std::uniform_real_distribution<double> later(-1.6, 1.5);
  std::uniform_real_distribution<double> time(0.3, 3.0);
  while (true) {
    std::vector<double> a(n), b(n);
    a[0] = first(rng);
    for (int i = 1; i < n; ++i) a[i] = later(rng);
    for (int i = 0; i < n; ++i) b[i] = first(rng);
    auto s = make(time(rng), a, b);
    if (!check_conditions(s)) return s;
  }
}

TEST(GaussianSpectral, Examples) {
  EXPECT_NEAR(gaussian_spectral_integral(0.0, 1.0), std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_NEAR(gaussian_spectral_integral(1.0, 1.0), 1.0, 1e-14);
  EXPECT_NEAR(gaussian_spectral_integral(-0.5, 2.0),
              boost::math::tgamma(0.25) * std::pow(2.0, -0.25), 1e-13);
}

TEST(GaussianSpectral, MatchesQuadrature) {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double alpha : {-0.9, -0.5, 0.0, 0.4, 1.0, 2.5}) {
    for (double t : {0.1, 1.0, 7.0}) {
      auto f = [&](double x) { return std::exp(-t * x * x) * std::pow(x, alpha); };
      const double oracle = 2.0 * integrator.integrate(f);
      EXPECT_NEAR(gaussian_spectral_integral(alpha, t), oracle, 1e-8 * oracle)
          << alpha << " " << t;
    }
  }
}

TEST(GaussianSpectral, DomainErrors) {
  EXPECT_THROW(gaussian_spectral_integral(-1.0, 1.0), DomainError);
  EXPECT_THROW(gaussian_spectral_integral(0.0, 0.0), DomainError);
}

TEST(ClosedForm, TrivialValues) {
  EXPECT_NEAR(closed_form(make(1, {0}, {0})), 1.0, 1e-15);
  EXPECT_NEAR(closed_form(make(1, {1}, {1})), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(closed_form(make(1, {0, 0}, {0, 0})), 0.5, 1e-15);
  EXPECT_NEAR(closed_form(make(1, {0, 0, 0}, {0, 0, 0})), 1.0 / 6.0, 1e-15);
}

TEST(ClosedForm, MixedExponentsAgainstQuadrature) {
  const auto spec = make(2, {0.5, -0.5}, {-0.25, 0.25});
  const auto oracle = brute_force(spec, OracleMethod::NestedQuadrature);
  EXPECT_TRUE(oracle.converged);
  EXPECT_NEAR(closed_form(spec), oracle.estimate, 1e-6 * oracle.estimate);
  EXPECT_NEAR(log_closed_form(spec), std::log(closed_form(spec)), 1e-14);
}

TEST(ClosedForm, RandomSpecsAgainstNestedQuadrature) {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      const auto spec = random_spec(rng, n);
      const auto oracle = brute_force(spec, OracleMethod::NestedQuadrature);
      const double v = closed_form(spec);
      EXPECT_TRUE(oracle.converged);
      EXPECT_NEAR(v, oracle.estimate, 1e-6 * v)
          << "n=" << n << " alphas=" << spec.alphas.transpose()
          << " betas=" << spec.betas.transpose();
      EXPECT_LE(std::abs(v - oracle.estimate), std::max(oracle.error_bound, 1e-9 * v));
    }
  }
}

TEST(ClosedForm, MonteCarloOracleUpToFive) {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 5; ++n) {
    auto spec = random_spec(rng, n);
    // Keep the later alphas nonnegative so the weight has finite variance.
    for (int i = 1; i < n; ++i) spec.alphas(i) = std::abs(spec.alphas(i));
    OracleBudget budget;
    budget.samples = 400'000;
    budget.seed = 100 + n;
    const auto mc = brute_force(spec, OracleMethod::MonteCarlo, budget);
    const double v = closed_form(spec);
    EXPECT_NEAR(mc.estimate, v, mc.error_bound + 1e-12) << "n=" << n;
    EXPECT_LT(mc.error_bound, 0.05 * v) << "n=" << n;
  }
}

TEST(ClosedForm, MonteCarloIsSeedDeterministic) {
  const auto spec = make(1.5, {0.3, 0.2}, {-0.4, 0.1});
  OracleBudget budget;
  budget.samples = 20'000;
  const auto a = brute_force(spec, OracleMethod::MonteCarlo, budget);
  const auto b = brute_force(spec, OracleMethod::MonteCarlo, budget);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.error_bound, b.error_bound);
}

TEST(ClosedForm, ScalingLaw) {
  std::mt19937_64 rng(3);
  for (int n = 1; n <= 3; ++n) {
    auto spec = random_spec(rng, n);
    spec.t = 1.0;
    const double total = spec.alphas.sum() + spec.betas.sum() + n;
    const double at1 = closed_form(spec);
    const auto q1 = brute_force(spec, OracleMethod::NestedQuadrature);
    spec.t = 2.0;
    EXPECT_NEAR(closed_form(spec), std::pow(2.0, total) * at1, 1e-13 * closed_form(spec));
    const auto q2 = brute_force(spec, OracleMethod::NestedQuadrature);
    EXPECT_NEAR(q2.estimate, std::pow(2.0, total) * q1.estimate, 1e-6 * q2.estimate);
  }
}

// I_n(t) = ∫_0^t s^{α_n} (t-s)^{β_n} I_{n-1}(s) ds with I_{n-1} in closed form.
TEST(ClosedForm, Recursion) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto spec = random_spec(rng, n);
      auto head = spec;
      head.alphas = spec.alphas.head(n - 1);
      head.betas = spec.betas.head(n - 1);
      const double a = spec.alphas(n - 1);
      const double b = spec.betas(n - 1);
      auto f = [&](double s, double sc) {
        const double right = sc > 0 ? sc : spec.t - s;
        const double left = sc < 0 ? -sc : s;
        if (!(left > 0) || !(right > 0)) return 0.0;
        head.t = left;
        return std::exp(a * std::log(left) + b * std::log(right) + log_closed_form(head));
      };
      const double v = integrator.integrate(f, 0.0, spec.t, 1e-12);
      EXPECT_NEAR(v, closed_form(spec), 1e-8 * closed_form(spec)) << "n=" << n;
    }
  }
}

TEST(ClosedForm, PositiveForValidSpecs) {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    const auto spec = random_spec(rng, 1 + i % 8);
    const double v = closed_form(spec);
    EXPECT_GT(v, 0.0);
    EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(CheckConditions, Diagnostics) {
  auto bad = check_conditions(make(1, {-2}, {0}));
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->clause, "alpha_1 > -1");
  EXPECT_FALSE(check_conditions(make(2, {0.5, -0.5}, {-0.25, 0.25})));
  bad = check_conditions(make(1, {-0.5, -2.4}, {-0.5, 0}));
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->k, 1);
  EXPECT_NE(bad->clause.find("alpha_{k+1}"), std::string::npos);
  bad = check_conditions(make(1, {0, 0, 0}, {0, -1.5, 0}));
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->clause, "beta_i > -1");
  EXPECT_EQ(bad->k, 2);
  EXPECT_TRUE(check_conditions(make(0, {0}, {0})));
  EXPECT_TRUE(check_conditions(make(1, {0, 0}, {0})));
}

TEST(ClosedForm, RefusesInvalidSpec) {
  try {
    closed_form(make(1, {-0.5, -2.4}, {-0.5, 0}));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("k=1"), std::string::npos);
  }
}

TEST(BruteForce, SizeLimits) {
  const auto four = make(1, {0, 0, 0, 0}, {0, 0, 0, 0});
  EXPECT_THROW(brute_force(four, OracleMethod::NestedQuadrature), SizeError);
  const auto six = make(1, {0, 0, 0, 0, 0, 0}, {0, 0, 0, 0, 0, 0});
  EXPECT_THROW(brute_force(six, OracleMethod::MonteCarlo), SizeError);
}

TEST(BruteForce, BetaCaseToTightTolerance) {
  const auto r = brute_force(make(1, {1}, {1}), OracleMethod::NestedQuadrature);
  EXPECT_NEAR(r.estimate, 1.0 / 6.0, 1e-10);
}

}  // namespace
}  // namespace pam
