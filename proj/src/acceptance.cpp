#include "pam/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "pam/chaos_bounds.hpp"
#include "pam/cli.hpp"
#include "pam/errors.hpp"
#include "pam/initial_data.hpp"
#include "pam/mc_verifier.hpp"
#include "pam/path_combinatorics.hpp"
#include "pam/simplex_integrals.hpp"
#include "pam/special_functions.hpp"

namespace pam {
namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

CriterionResult start(std::string id, std::string title) {
  CriterionResult r;
  r.id = std::move(id);
  r.title = std::move(title);
  return r;
}

std::string params_label(const FractionalParams& p) { return fmt("(%.2f,%.2f)", p.H0(), p.H()); }

CriterionResult identity_criterion(std::uint64_t seed) {
  auto r = start("1", "combinatorial identity and |A_n| = 2^{n-1}");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> num(1, 1000);
  int checked = 0;
  std::string first_bad;
  for (int n = 2; n <= 12; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Rational> xs;
      for (int i = 0; i < n; ++i) xs.emplace_back(num(rng), num(rng));
      ++checked;
      if (!expand_and_verify_identity(xs).holds() && first_bad.empty()) {
        first_bad = fmt("identity fails at n=%d trial %d", n, trial);
      }
    }
  }
  std::string card_bad;
  for (int n = 1; n <= 20; ++n) {
    if (enumerate_exponent_vectors(n).size() != (std::size_t{1} << (n - 1)) && card_bad.empty()) {
      card_bad = fmt("|A_%d| wrong", n);
    }
  }
  r.pass = first_bad.empty() && card_bad.empty();
  r.detail = r.pass ? fmt("%d exact identities, cardinalities n<=20 ok", checked)
                    : first_bad + " " + card_bad;
  return r;
}

CriterionResult figure_criterion() {
  auto r = start("2", "A_4 equals the eight reference paths");
  const std::vector<std::string> want{"2110", "2101", "2020", "2011",
                                      "1210", "1201", "1120", "1111"};
  std::vector<std::string> got;
  for (const auto& a : enumerate_exponent_vectors(4)) got.push_back(a.digits());
  r.pass = got == want;
  std::string joined;
  for (const auto& s : got) joined += (joined.empty() ? "" : " ") + s;
  r.detail = joined;
  return r;
}

SimplexIntegralSpec random_spec(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> first(-0.9, 1.5);
  std::uniform_real_distribution<double> later(-1.6, 1.5);
  std::uniform_real_distribution<double> time(0.3, 3.0);
  while (true) {
    SimplexIntegralSpec s{time(rng), Eigen::VectorXd(n), Eigen::VectorXd(n)};
    s.alphas(0) = first(rng);
    for (int i = 1; i < n; ++i) s.alphas(i) = later(rng);
    for (int i = 0; i < n; ++i) s.betas(i) = first(rng);
    if (!check_conditions(s)) return s;
  }
}

CriterionResult simplex_criterion(std::uint64_t seed) {
  auto r = start("3", "simplex closed form vs nested quadrature");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  int bad = 0;
  for (int k = 0; k < 50; ++k) {
    const int n = 1 + k % 3;
    const auto spec = random_spec(rng, n);
    const double v = closed_form(spec);
    const auto oracle = brute_force(spec, OracleMethod::NestedQuadrature);
    const double rel = std::abs(v - oracle.estimate) / std::abs(v);
    worst = std::max(worst, rel);
    if (!(rel <= 1e-6)) ++bad;
  }
  SimplexIntegralSpec beta{1.0, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)};
  const double beta_err = std::abs(closed_form(beta) - 1.0 / 6);
  r.pass = bad == 0 && beta_err <= 1e-12;
  r.detail = fmt("50 specs, worst rel diff %.3g, %d over 1e-6; Beta(2,2) error %.3g", worst, bad,
                 beta_err);
  return r;
}

CriterionResult spectral_criterion() {
  auto r = start("4", "Gaussian spectral integral vs quadrature");
  boost::math::quadrature::exp_sinh<double> integrator;
  double worst = 0.0;
  for (double alpha : {-0.9, -0.5, 0.0, 0.5, 1.0}) {
    for (double t : {0.5, 1.0, 2.0}) {
      auto f = [&](double x) { return x > 0 ? std::exp(-t * x * x) * std::pow(x, alpha) : 0.0; };
      const double q = 2 * integrator.integrate(f, 1e-14);
      const double v = gaussian_spectral_integral(alpha, t);
      worst = std::max(worst, std::abs(v - q) / v);
    }
  }
  r.pass = worst <= 1e-8;
  r.detail = fmt("15 cases, worst rel diff %.3g", worst);
  return r;
}

std::vector<CriterionResult> gamma_criteria() {
  auto bound = start("5", "gamma_n <= 1 over A_n, n <= 12, maximizer all-ones");
  auto moves = start("6", "gamma_n decreases under every legal move_down, n <= 10");
  auto interior = start("6i", "diagnostic: interior moves (2 <= i <= n-2) decrease gamma_n");
  interior.diagnostic = true;

  long over = 0;
  long total = 0;
  double worst = 1.0;
  std::string worst_at;
  bool ones_ok = true;
  bool ones_max = true;
  long move_total = 0;
  long move_bad_first = 0;
  long move_bad_end = 0;
  long move_bad_interior = 0;
  long interior_total = 0;
  for (const auto& p : admissible_grid()) {
    for (int n = 1; n <= 12; ++n) {
      const auto all = enumerate_exponent_vectors(n);
      const double ones = gamma_n(ExponentVector(std::vector<int>(n, 1)), p);
      ones_ok = ones_ok && std::abs(ones - 1) <= 1e-12;
      for (const auto& a : all) {
        const double g = gamma_n(a, p);
        ++total;
        if (g > 1 + 1e-12) {
          ++over;
          if (g > worst) {
            worst = g;
            worst_at = "a=" + a.digits() + " at " + params_label(p);
          }
        }
        if (g > ones + 1e-12) ones_max = false;
        if (n > 10) continue;
        for (int i : diagonal_touch_points(a)) {
          const double after = gamma_n(move_down(a, i), p);
          ++move_total;
          const bool is_interior = i >= 2 && i <= n - 2;
          interior_total += is_interior;
          if (after <= g + 1e-12) continue;
          if (i == 1) {
            ++move_bad_first;
          } else if (i == n - 1) {
            ++move_bad_end;
          } else {
            ++move_bad_interior;
          }
        }
      }
    }
  }
  bound.pass = over == 0 && ones_ok && ones_max;
  bound.detail = fmt("%ld of %ld values exceed 1; max %.17g ", over, total, worst) + worst_at +
                 (ones_ok ? "; all-ones = 1" : "; all-ones != 1") +
                 (ones_max ? "" : "; all-ones is not the maximizer");
  moves.pass = move_bad_first + move_bad_end + move_bad_interior == 0;
  moves.detail = fmt("%ld moves; increases at i=1: %ld, at i=n-1: %ld, interior: %ld", move_total,
                     move_bad_first, move_bad_end, move_bad_interior);
  interior.pass = move_bad_interior == 0;
  interior.detail = fmt("%ld interior moves, %ld increases", interior_total, move_bad_interior);
  return {bound, moves, interior};
}

CriterionResult gamma_ratio_criterion() {
  auto r = start("7", "z -> Gamma(z+a)/Gamma(z) nondecreasing");
  long drops = 0;
  long points = 0;
  for (double a : {0.05, 0.5, 2.0}) {
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double z = 0.1 * std::pow(500.0, i / 2000.0);
      const double v = gamma_ratio(PositiveReal(z), a);
      ++points;
      if (i > 0 && v < prev - 1e-12 * std::max(1.0, prev)) ++drops;
      prev = v;
    }
  }
  r.pass = drops == 0;
  r.detail = fmt("%ld grid points on [0.1, 50], %ld decreases", points, drops);
  return r;
}

CriterionResult ab_criterion() {
  auto r = start("8", "ab-condition on A_n, n <= 12, all grid parameters");
  long checked = 0;
  long failed = 0;
  long printed_failed = 0;
  for (const auto& p : admissible_grid()) {
    for (int n = 1; n <= 12; ++n) {
      for (const auto& a : enumerate_exponent_vectors(n)) {
        const auto alpha = spatial_exponents(a, p);
        ++checked;
        try {
          const auto tilde = tilde_exponents(alpha, p);
          failed += !verify_ab_condition(tilde, alpha, AbConditionForm::Tilde);
          printed_failed += !verify_ab_condition(tilde, alpha, AbConditionForm::AsPrinted);
        } catch (const ValidationError&) {
          ++failed;
          ++printed_failed;
        }
      }
    }
  }
  r.pass = failed == 0;
  r.detail = fmt("%ld checks, %ld failures (printed form: %ld failures)", checked, failed,
                 printed_failed);
  return r;
}

CriterionResult oracle_criterion(const AcceptanceOptions& o) {
  auto r = start("9", "MC chaos norms vs exact-constants bound; psi comparison");
  McBudget budget;
  budget.samples = o.mc_samples;
  budget.workers = o.workers;
  McBudget lemma_budget = budget;
  lemma_budget.samples = o.lemma_samples;
  std::mt19937_64 rng(o.seed + 9);
  int bound_checks = 0;
  int bound_fail = 0;
  int lemma_checks = 0;
  int lemma_fail = 0;
  double b_min_max = 0.0;
  std::string b_used;
  std::uint64_t stream = o.seed;
  for (auto [H0, H] : {std::pair{0.75, 0.3}, std::pair{0.85, 0.2}}) {
    const FractionalParams p(H0, H, sharp_lhs_constant(H0));
    b_used += fmt("%sb=%.6f at %s", b_used.empty() ? "" : ", ", p.b_H0(), params_label(p).c_str());
    for (int n : {1, 2}) {
      for (const InitialMeasure& mu : {InitialMeasure{DiracAt{0.0}}, InitialMeasure{LebesgueConstant{1.0}}}) {
        for (double t : {0.5, 1.0, 2.0}) {
          const auto check = verify_term_bound(n, t, 0.0, p, mu, budget, ++stream);
          ++bound_checks;
          bound_fail += !check.pass;
          b_min_max = std::max(b_min_max, check.b_min);
          std::uniform_real_distribution<double> u(0.0, t);
          for (int k = 0; k < 10; ++k) {
            std::vector<double> times(n);
            do {
              for (auto& s : times) s = u(rng);
              std::sort(times.begin(), times.end());
            } while (!(times.front() > 0) || (n == 2 && !(times[1] > times[0])));
            const auto lemma = verify_lemma32(n, times, t, 0.0, p, mu, lemma_budget, ++stream);
            ++lemma_checks;
            lemma_fail += !lemma.pass;
          }
        }
      }
    }
  }
  r.pass = bound_fail == 0 && lemma_fail == 0;
  r.detail = fmt("bound: %d/%d pass, max b_min %.4f (", bound_checks - bound_fail, bound_checks,
                 b_min_max) +
             b_used + fmt("); psi comparison: %d/%d pass", lemma_checks - lemma_fail, lemma_checks);
  return r;
}

CriterionResult growth_criterion() {
  auto r = start("10", "growth exponents in t and p; envelope dominates series");
  const std::vector<double> ts{1, 2, 5, 10, 20, 50, 100};
  const std::vector<double> ps{2, 4, 8, 16, 32};
  double worst_t = 0.0;
  double worst_p = 0.0;
  std::string worst_t_at;
  std::string worst_p_at;
  bool envelope_ok = true;
  for (const auto& p : admissible_grid()) {
    const double C = witness_constant(p);
    const auto g = growth_exponents(p, C, ts, ps);
    for (std::size_t i = 0; i < g.t_slopes.size(); ++i) {
      const double dev = std::abs(g.t_slopes[i] / g.t_target - 1);
      if (dev > worst_t) {
        worst_t = dev;
        worst_t_at = fmt("p=%g at %s: %.4f vs %.4f", ps[i], params_label(p).c_str(), g.t_slopes[i],
                         g.t_target);
      }
    }
    for (std::size_t j = 0; j < g.p_slopes.size(); ++j) {
      const double dev = std::abs(g.p_slopes[j] / g.p_target - 1);
      if (dev > worst_p) {
        worst_p = dev;
        worst_p_at = fmt("t=%g at %s: %.4f vs %.4f", ts[j], params_label(p).c_str(), g.p_slopes[j],
                         g.p_target);
      }
    }
    const auto fit = fit_envelope(p, C, ts, ps);
    for (double t : ts) {
      for (double pp : ps) {
        const auto m = moment_bound(pp, t, 0.0, p, LebesgueConstant{1.0}, C, fit);
        if (m.log_envelope_value < m.log_series_value - 1e-9 * std::abs(m.log_series_value)) {
          envelope_ok = false;
        }
      }
    }
  }
  r.pass = worst_t <= 0.05 && worst_p <= 0.10 && envelope_ok;
  r.detail = fmt("worst t-exponent deviation %.1f%% (", 100 * worst_t) + worst_t_at +
             fmt("); worst p-exponent deviation %.1f%% (", 100 * worst_p) + worst_p_at + ")" +
             (envelope_ok ? "; envelope >= series on grid" : "; envelope below series");
  return r;
}

CriterionResult j0_criterion() {
  auto r = start("11", "J_0 closed forms and the growing-tail condition");
  bool exact = true;
  double worst_x2 = 0.0;
  double worst_cond = 0.0;
  const CustomDensity square{[](double y) { return y * y; }, "x2-quadrature"};
  for (double t : {0.3, 1.0, 2.0}) {
    for (double x : {-1.5, 0.0, 3.0}) {
      exact = exact && j0(t, x, DiracAt{0.0}) == heat_kernel(t, x) &&
              j0(t, x, LebesgueConstant{1.0}) == 1.0;
      const double q = j0(t, x, square);
      worst_x2 = std::max(worst_x2, std::abs(j0(t, x, PolynomialDensity{}) - (x * x + t)));
      worst_x2 = std::max(worst_x2, std::abs(q - (x * x + t)));
    }
  }
  for (double a : {0.1, 0.5, 1.0, 4.0, 10.0}) {
    const double want = std::sqrt(std::numbers::pi) / 2 * std::pow(a, -1.5);
    worst_cond = std::max(worst_cond, std::abs(gaussian_moment(square, a).value - want) / want);
    worst_cond =
        std::max(worst_cond, std::abs(gaussian_moment(PolynomialDensity{}, a).value - want) / want);
  }
  r.pass = exact && worst_x2 <= 1e-8 && worst_cond <= 1e-10;
  r.detail = fmt("dirac/constant exact: %s; x^2 vs quadrature %.3g; condition integral rel %.3g",
                 exact ? "yes" : "no", worst_x2, worst_cond);
  return r;
}

CriterionResult stirling_criterion() {
  auto r = start("12", "Stirling lower bound Gamma(an+1+b) >= C^n (n!)^a");
  int found = 0;
  int worst_threshold = 0;
  for (const auto& p : admissible_grid()) {
    const double a = p.time_exponent() / (2 * p.H0());
    const double b = -(1 - p.H()) / (2 * p.H0());
    const auto s = stirling_lb_check(a, b, stirling_default_C(a), 1, 500);
    found += s.found;
    worst_threshold = std::max(worst_threshold, s.threshold);
  }
  r.pass = found == 25;
  r.detail = fmt("%d/25 grid points, largest threshold N = %d, C = a^a/2", found, worst_threshold);
  return r;
}

CriterionResult determinism_criterion(const AcceptanceOptions& o) {
  auto r = start("13", "mc-verify reports byte-identical across runs");
  const std::vector<std::string> args{"mc-verify", "--n",       "2",
                                      "--t",       "1",         "--H0",
                                      "0.75",      "--H",       "0.3",
                                      "--samples", "50000",     "--seed",
                                      std::to_string(o.seed),   "--workers",
                                      std::to_string(std::max(2, o.workers))};
  std::ostringstream out1;
  std::ostringstream out2;
  std::ostringstream err;
  const int c1 = run(args, out1, err);
  const int c2 = run(args, out2, err);
  r.pass = c1 != kExitUsage && c1 == c2 && out1.str() == out2.str() && !out1.str().empty();
  r.detail = fmt("%zu-byte report, exit codes %d/%d, identical: %s", out1.str().size(), c1, c2,
                 out1.str() == out2.str() ? "yes" : "no");
  return r;
}

}  // namespace

bool known_unattainable(const std::string& id) {
  static const std::set<std::string> known{"5", "6", "10"};
  return known.contains(id);
}

std::string format_line(const CriterionResult& r) {
  std::string status = r.pass ? "PASS" : (r.known_unattainable ? "FAIL (known)" : "FAIL");
  return "criterion " + r.id + ": " + status + " | " + r.title + " | " + r.detail;
}

std::vector<CriterionResult> run_acceptance(
    const AcceptanceOptions& options, const std::function<void(const CriterionResult&)>& report) {
  std::vector<CriterionResult> out;
  auto add = [&](CriterionResult r) {
    r.known_unattainable = !r.pass && known_unattainable(r.id);
    if (report) report(r);
    out.push_back(std::move(r));
  };
  add(identity_criterion(options.seed));
  add(figure_criterion());
  add(simplex_criterion(options.seed + 3));
  add(spectral_criterion());
  for (auto& r : gamma_criteria()) add(std::move(r));
  add(gamma_ratio_criterion());
  add(ab_criterion());
  add(oracle_criterion(options));
  add(growth_criterion());
  add(j0_criterion());
  add(stirling_criterion());
  add(determinism_criterion(options));
  return out;
}

int acceptance_exit_code(const std::vector<CriterionResult>& results, bool strict) {
  for (const auto& r : results) {
    if (r.pass || r.diagnostic) continue;
    if (strict || !r.known_unattainable) return 1;
  }
  return 0;
}

}  // namespace pam
