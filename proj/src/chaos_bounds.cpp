#include "pam/chaos_bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "pam/errors.hpp"
#include "pam/special_functions.hpp"

namespace pam {
namespace {

double lg(double x) {
  if (!(x > 0)) {
    throw NumericalError("chaos_bounds: non-positive gamma argument " + std::to_string(x) +
                         " (parameter validation should have prevented this)");
  }
  return log_gamma(PositiveReal(x));
}

// Shorthands of the exponent algebra:
//   q = 1/(4H0), c = (1-2H)/(4H0), d = (4H0+4H-3)/(4H0).
struct Coefficients {
  double q, c, d, r;
  explicit Coefficients(const FractionalParams& p)
      : q(0.25 / p.H0()),
        c((1 - 2 * p.H()) * 0.25 / p.H0()),
        d((4 * p.H0() + 4 * p.H() - 3) * 0.25 / p.H0()),
        r(1 - 2 * p.H()) {}

  // θ_k given s_{k-1} = a_1 + ... + a_{k-1}.
  double theta(int k, int s_prev) const { return 1 - q + k * d + c * s_prev; }
};

// Every factor of the summand depends on the partial-sum excesses
// e_j = a_1 + ... + a_j - j ∈ {0, 1} of at most three consecutive indices;
// a_j = 1 + e_j - e_{j-1}, e_0 = e_n = 0. The summand of the exact bound is
// exp Σ_j w[j](e_{j-2}, e_{j-1}, e_j), and the γ_n factor alone is
// exp Σ_j g[j](e_{j-2}, e_j).
struct StepTable {
  int n = 0;
  std::vector<std::array<double, 8>> w;  // w[j][4 e_{j-2} + 2 e_{j-1} + e_j]
  std::vector<std::array<double, 8>> g;

  static int key(int e2, int e1, int e) { return 4 * e2 + 2 * e1 + e; }
  bool feasible(int j, int e2, int e1, int e) const {
    if (j == 1 && (e2 != 0 || e1 != 0)) return false;
    if (j == 2 && e2 != 0) return false;
    if (j == n && e != 0) return false;
    return true;
  }
};

StepTable build_table(int n, double t, const FractionalParams& params) {
  const Coefficients k(params);
  const double log_t = std::log(t);
  const double log_cH = std::log(params.c_H());
  StepTable T;
  T.n = n;
  T.w.assign(n + 1, {});
  T.g.assign(n + 1, {});
  for (int j = 1; j <= n; ++j) {
    for (int e2 = 0; e2 <= 1; ++e2) {
      for (int e1 = 0; e1 <= 1; ++e1) {
        for (int e = 0; e <= 1; ++e) {
          const int idx = StepTable::key(e2, e1, e);
          if (!T.feasible(j, e2, e1, e)) {
            T.w[j][idx] = -INFINITY;
            T.g[j][idx] = -INFINITY;
            continue;
          }
          const int a = 1 + e - e1;
          const int a_prev = 1 + e1 - e2;
          const double alpha = k.r * a;
          const double alpha_t = j == 1 ? (4 * params.H() - 3 + alpha) * k.q
                                        : (4 * params.H() - 2 + k.r * a_prev + alpha) * k.q;
          const double beta_t = -(alpha + 1) * k.q;
          double w = lg(beta_t + 1) + 2 * k.q * (lg(0.5 * (1 + alpha)) + log_cH) +
                     (alpha_t + beta_t + 1) * log_t;
          double g = 0.0;
          if (j == 1) w += lg(alpha_t + 1);
          if (j >= 2) {
            const int kk = j - 1;
            const double th = k.theta(kk, kk - 1 + e2);
            g = lg(th + k.c * (e - e2)) - lg(th);
            w += g;
          }
          if (j == n) w += (alpha + 1) * k.q * log_t - lg(k.theta(n, n - 1 + e1));
          T.w[j][idx] = w;
          T.g[j][idx] = g;
        }
      }
    }
  }
  return T;
}

// Dynamic programme over (e_{j-1}, e_j) with a pluggable semiring "sum".
double reduce(const StepTable& T, const std::vector<std::array<double, 8>>& table,
              const std::function<double(double, double)>& plus) {
  std::array<double, 4> v;  // v[2 e_{j-1} + e_j]
  v.fill(-INFINITY);
  for (int e = 0; e <= 1; ++e) v[e] = table[1][StepTable::key(0, 0, e)];
  if (T.n == 1) return v[0];
  for (int j = 2; j <= T.n; ++j) {
    std::array<double, 4> next;
    next.fill(-INFINITY);
    for (int e1 = 0; e1 <= 1; ++e1) {
      for (int e = 0; e <= 1; ++e) {
        double acc = -INFINITY;
        for (int e2 = 0; e2 <= 1; ++e2) {
          const double step = table[j][StepTable::key(e2, e1, e)];
          if (step == -INFINITY || v[2 * e2 + e1] == -INFINITY) continue;
          acc = plus(acc, v[2 * e2 + e1] + step);
        }
        next[2 * e1 + e] = acc;
      }
    }
    v = next;
  }
  return plus(v[0], v[2]);
}

double max_plus(double a, double b) { return std::max(a, b); }
double log_plus(double a, double b) { return log_add_exp(a, b); }

// Visits A_n in descending lexicographic order (e_j = 1 first) and
// accumulates Σ exp(L(a) - shift) with Kahan compensation.
class OrderedSum {
 public:
  OrderedSum(const StepTable& T, double shift) : T_(T), shift_(shift) {}

  double run() {
    visit(1, 0, 0, 0.0);
    return std::log(sum_) + shift_;
  }

 private:
  void visit(int j, int e2, int e1, double acc) {
    if (j == T_.n) {
      add(std::exp(acc + T_.w[j][StepTable::key(e2, e1, 0)] - shift_));
      return;
    }
    for (int e = 1; e >= 0; --e) visit(j + 1, e1, e, acc + T_.w[j][StepTable::key(e2, e1, e)]);
  }
  void add(double x) {
    const double y = x - comp_;
    const double s = sum_ + y;
    comp_ = (s - sum_) - y;
    sum_ = s;
  }

  const StepTable& T_;
  double shift_;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void require_positive(double v, const char* what) {
  if (!(v > 0) || !std::isfinite(v)) throw DomainError(what);
}

}  // namespace

FractionalParams::FractionalParams(double H0, double H, double b_H0) : H0_(H0), H_(H), b_(b_H0) {
  if (!(H0 > 0.5 && H0 < 1)) throw ValidationError("FractionalParams: H0 must be in (1/2, 1)");
  if (!(H > 0 && H < 0.5)) throw ValidationError("FractionalParams: H must be in (0, 1/2)");
  if (!(H + H0 > 0.75)) throw ValidationError("FractionalParams: H + H0 must exceed 3/4");
  if (!(b_H0 > 0) || !std::isfinite(b_H0)) {
    throw ValidationError("FractionalParams: b_H0 must be > 0");
  }
}

double FractionalParams::c_H() const {
  return std::exp(log_gamma(PositiveReal(2 * H_ + 1))) * std::sin(std::numbers::pi * H_) /
         (2 * std::numbers::pi);
}

double sharp_lhs_constant(double H0) {
  if (!(H0 > 0.5 && H0 < 1)) throw DomainError("sharp_lhs_constant: H0 must be in (1/2, 1)");
  const double log_hls = (1.5 - 2 * H0) * std::log(std::numbers::pi) +
                         log_gamma(PositiveReal(H0 - 0.5)) - log_gamma(PositiveReal(H0));
  return H0 * (2 * H0 - 1) * std::exp(log_hls);
}

std::vector<FractionalParams> admissible_grid() {
  std::vector<FractionalParams> grid;
  for (double H0 : {0.6, 0.7, 0.8, 0.9, 0.95}) {
    for (double H : {0.2, 0.25, 0.3, 0.4, 0.45}) grid.emplace_back(H0, H);
  }
  return grid;
}

Eigen::VectorXd spatial_exponents(const ExponentVector& a, const FractionalParams& params) {
  Eigen::VectorXd alpha(a.size());
  for (int j = 0; j < a.size(); ++j) alpha(j) = (1 - 2 * params.H()) * a.values()[j];
  return alpha;
}

TildeExponents tilde_exponents(const Eigen::VectorXd& alpha, const FractionalParams& params) {
  const Eigen::Index n = alpha.size();
  if (n == 0) throw SizeError("tilde_exponents: empty exponent vector");
  const double q = 0.25 / params.H0();
  const double H = params.H();
  TildeExponents out;
  out.alpha_tilde.resize(n);
  out.alpha_tilde(0) = (4 * H - 3 + alpha(0)) * q;
  if (n > 1) {
    out.alpha_tilde.tail(n - 1) =
        ((4 * H - 2) + alpha.head(n - 1).array() + alpha.tail(n - 1).array()) * q;
  }
  out.beta_tilde = -(alpha.array() + 1) * q;
  if (!(out.alpha_tilde(0) > -1)) {
    throw ValidationError("tilde_exponents: alpha~_1 <= -1");
  }
  if (!(out.beta_tilde.array() > -1).all()) {
    throw ValidationError("tilde_exponents: beta~_j <= -1 (requires H + H0 > 3/4)");
  }
  return out;
}

bool verify_ab_condition(const TildeExponents& tilde, const Eigen::VectorXd& alpha,
                         AbConditionForm form) {
  const Eigen::Index n = alpha.size();
  if (tilde.alpha_tilde.size() != n || tilde.beta_tilde.size() != n) {
    throw SizeError("verify_ab_condition: inconsistent lengths");
  }
  double partial = 0.0;
  for (Eigen::Index k = 1; k <= n - 1; ++k) {
    partial += tilde.alpha_tilde(k - 1) + tilde.beta_tilde(k - 1);
    const double next = form == AbConditionForm::Tilde ? tilde.alpha_tilde(k) : alpha(k);
    if (!(partial + static_cast<double>(k) + 1 + next > 0)) return false;
  }
  return true;
}

double theta(int k, const ExponentVector& a, const FractionalParams& params) {
  if (k < 1 || k > a.size()) throw DomainError("theta: k must be in [1, n]");
  if (k == 1) return (params.H() - 1) / params.H0() + 2;
  int s = 0;
  for (int i = 1; i <= k - 1; ++i) s += a.at(i);
  return Coefficients(params).theta(k, s);
}

double log_gamma_n(const ExponentVector& a, const FractionalParams& params) {
  const Coefficients k(params);
  double v = 0.0;
  for (int i = 1; i <= a.size() - 1; ++i) {
    const double th = theta(i, a, params);
    v += lg(th + k.c * (a.at(i) + a.at(i + 1) - 2)) - lg(th);
  }
  return v;
}

double gamma_n(const ExponentVector& a, const FractionalParams& params) {
  return std::exp(log_gamma_n(a, params));
}

bool verify_z_ordering(const ExponentVector& a, const FractionalParams& params) {
  const Coefficients k(params);
  for (int i = 2; i <= a.size() - 1; ++i) {
    const double z1 = theta(i - 1, a, params) + k.c * (a.at(i - 1) + a.at(i) - 2);
    const double z2 = theta(i + 1, a, params);
    if (!(z1 <= z2 + 1e-12)) return false;
  }
  return true;
}

ChaosTermBound term_bound(int n, double t, const FractionalParams& params, BoundMode mode,
                          double C, SumRoute route) {
  if (n < 0) throw DomainError("term_bound: n must be >= 0");
  require_positive(t, "term_bound: t must be > 0");
  ChaosTermBound out;
  out.n = n;
  out.time_exponent = n * params.time_exponent();
  if (n == 0) return out;

  if (mode == BoundMode::Asymptotic) {
    require_positive(C, "term_bound: C must be > 0");
    out.log_bound = n * std::log(C) - params.H() * log_factorial(n) +
                    out.time_exponent * std::log(t);
    return out;
  }
  if (n > kMaxExactTerm) {
    throw SizeError("term_bound: exact-constants mode needs n <= " +
                    std::to_string(kMaxExactTerm));
  }
  const StepTable T = build_table(n, t, params);
  const double peak = reduce(T, T.w, max_plus);
  const double log_sum = route == SumRoute::Enumeration ? OrderedSum(T, peak).run()
                                                        : reduce(T, T.w, log_plus);
  out.gamma_n = std::exp(reduce(T, T.g, max_plus));
  out.log_bound = n * std::log(params.b_H0()) + (2 * params.H0() - 1) * log_factorial(n) +
                  2 * params.H0() * log_sum;
  return out;
}

StirlingCheck stirling_lb_check(double a, double b, double C, int n_min, int n_max) {
  require_positive(a, "stirling_lb_check: a must be > 0");
  require_positive(C, "stirling_lb_check: C must be > 0");
  if (n_min < 0 || n_max < n_min) throw DomainError("stirling_lb_check: bad n range");
  if (!(a * n_min + 1 + b > 0)) throw DomainError("stirling_lb_check: a n + 1 + b must be > 0");
  StirlingCheck out;
  double min_margin = INFINITY;
  for (int n = n_max; n >= n_min; --n) {
    const double rhs = n * std::log(C) + a * log_factorial(n);
    const double margin = log_gamma(PositiveReal(a * n + 1 + b)) - rhs;
    if (margin < -1e-12 * (1 + std::abs(rhs))) break;
    out.found = true;
    out.threshold = n;
    min_margin = std::min(min_margin, margin);
  }
  out.min_margin = out.found ? min_margin : 0.0;
  return out;
}

SeriesValue log_chaos_series(double x, double H) {
  if (!(x >= 0) || !std::isfinite(x)) throw DomainError("log_chaos_series: x must be >= 0");
  if (!(H > 0 && H < 1)) throw DomainError("log_chaos_series: H must be in (0, 1)");
  SeriesValue out;
  if (x == 0) return out;
  const double log_x = std::log(x);
  auto phi = [&](double v) { return v * log_x - 0.5 * H * log_gamma(PositiveReal(v + 1)); };

  // Peak of φ: ψ(ν+1) = 2 ln x / H, with ψ(z) ≈ ln(z - 1/2).
  const double y = 2 * log_x / H;
  const double nu_guess = y > 700 ? INFINITY : std::max(0.0, std::exp(y) + 0.5 - 1);
  const double width = std::sqrt(2 * (nu_guess + 1) / H);
  constexpr double kDirectLimit = 1e5;
  if (nu_guess + 40 * width + 100 <= kDirectLimit) {
    double acc = 0.0;  // n = 0 term
    for (long n = 1;; ++n) {
      if (n > 10 * static_cast<long>(kDirectLimit)) {
        throw NumericalError("log_chaos_series: no convergence within the term budget");
      }
      const double term = phi(static_cast<double>(n));
      acc = log_add_exp(acc, term);
      if (n > nu_guess && term < acc - 37.0) {
        out.truncation_index = n;
        break;
      }
    }
    out.log_sum = acc;
    return out;
  }
  // Laplace: the summand is smooth on the scale of its width sqrt(2ν/H) ≫ 1,
  // so Σ f(n) = ∫ f up to exponentially small terms, and the integral is
  // Gaussian around ν* to relative order 1/ν*.
  double z = std::exp(std::min(y, 700.0)) + 0.5;
  for (int it = 0; it < 50; ++it) {
    const double trigamma = 1 / z + 0.5 / (z * z) + 1 / (6 * z * z * z);
    const double step = (digamma(PositiveReal(z)) - y) / trigamma;
    z -= step;
    if (std::abs(step) <= 1e-15 * z) break;
  }
  const double nu = z - 1;
  const double curvature = 0.5 * H * (1 / z + 0.5 / (z * z));
  out.log_sum = phi(nu) + 0.5 * std::log(2 * std::numbers::pi / curvature);
  out.truncation_index = static_cast<long>(std::min(nu + 40 / std::sqrt(curvature), 9e18));
  out.laplace_route = true;
  return out;
}

double witness_constant(const FractionalParams& params, int n_max) {
  if (n_max < 1 || n_max > kMaxExactTerm) throw SizeError("witness_constant: bad n_max");
  double best = -INFINITY;
  for (int n = 1; n <= n_max; ++n) {
    const double log_k = term_bound(n, 1.0, params, BoundMode::ExactConstants, 1.0,
                                    SumRoute::TransferMatrix)
                             .log_bound;
    best = std::max(best, (log_k + params.H() * log_factorial(n)) / n);
  }
  return std::exp(best);
}

namespace {

double series_x(double p, double t, double C, const FractionalParams& params) {
  return std::sqrt((p - 1) * C * std::pow(t, params.time_exponent()));
}

double envelope_u(double p, double t, const FractionalParams& params) {
  const double H = params.H();
  return std::pow(p, (H + 1) / H) * std::pow(t, params.time_exponent() / H);
}

void check_point(double p, double t) {
  if (!(p >= 2) || !std::isfinite(p)) throw DomainError("moment_bound: p must be >= 2");
  require_positive(t, "moment_bound: t must be > 0");
}

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const Eigen::Index m = static_cast<Eigen::Index>(xs.size());
  const Eigen::VectorXd X = Eigen::Map<const Eigen::VectorXd>(xs.data(), m);
  const Eigen::VectorXd Y = Eigen::Map<const Eigen::VectorXd>(ys.data(), m);
  const Eigen::ArrayXd dx = X.array() - X.mean();
  return (dx * (Y.array() - Y.mean())).sum() / dx.square().sum();
}

}  // namespace

EnvelopeFit fit_envelope(const FractionalParams& params, double C, std::span<const double> ts,
                         std::span<const double> ps) {
  require_positive(C, "fit_envelope: C must be > 0");
  if (ts.empty() || ps.empty()) throw SizeError("fit_envelope: empty grid");
  EnvelopeFit fit;
  fit.C2 = 0.5 * params.H() * std::pow(C, 1 / params.H());
  double log_c1 = -INFINITY;
  for (double t : ts) {
    for (double p : ps) {
      check_point(p, t);
      const double log_s = log_chaos_series(series_x(p, t, C, params), params.H()).log_sum;
      log_c1 = std::max(log_c1, log_s - fit.C2 * envelope_u(p, t, params) / p);
    }
  }
  // Rounded up so the binding grid point still dominates after exp/log round trips.
  fit.C1 = std::exp(log_c1) * (1 + 1e-12);
  return fit;
}

MomentBound moment_bound(double p, double t, double x, const FractionalParams& params,
                         const InitialMeasure& measure, double C, const EnvelopeFit& fit) {
  check_point(p, t);
  require_positive(C, "moment_bound: C must be > 0");
  const double log_j0 = std::log(j0(t, x, measure));
  const auto series = log_chaos_series(series_x(p, t, C, params), params.H());
  MomentBound out;
  out.fit = fit;
  out.truncation_index = series.truncation_index;
  out.log_series_value = p * (log_j0 + series.log_sum);
  out.log_envelope_value = p * (std::log(fit.C1) + log_j0) + fit.C2 * envelope_u(p, t, params);
  out.series_value = std::exp(out.log_series_value);
  out.envelope_value = std::exp(out.log_envelope_value);
  return out;
}

MomentBound moment_bound(double p, double t, double x, const FractionalParams& params,
                         const InitialMeasure& measure, double C) {
  const double ts[] = {t};
  const double ps[] = {p};
  return moment_bound(p, t, x, params, measure, C, fit_envelope(params, C, ts, ps));
}

GrowthFit growth_exponents(const FractionalParams& params, double C, std::span<const double> ts,
                           std::span<const double> ps) {
  if (ts.size() < 2 || ps.size() < 2) throw SizeError("growth_exponents: need >= 2 points each");
  GrowthFit out;
  out.t_target = params.time_exponent() / params.H();
  out.p_target = (params.H() + 1) / params.H();
  std::vector<std::vector<double>> log_s(ps.size(), std::vector<double>(ts.size()));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < ts.size(); ++j) {
      check_point(ps[i], ts[j]);
      log_s[i][j] = log_chaos_series(series_x(ps[i], ts[j], C, params), params.H()).log_sum;
    }
  }
  std::vector<double> lt, lp;
  for (double t : ts) lt.push_back(std::log(t));
  for (double p : ps) lp.push_back(std::log(p));
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::vector<double> y;
    for (double v : log_s[i]) y.push_back(std::log(v));
    out.t_slopes.push_back(slope(lt, y));
  }
  for (std::size_t j = 0; j < ts.size(); ++j) {
    std::vector<double> y;
    for (std::size_t i = 0; i < ps.size(); ++i) y.push_back(std::log(ps[i] * log_s[i][j]));
    out.p_slopes.push_back(slope(lp, y));
  }
  return out;
}

}  // namespace pam
