#include "pam/mc_verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "pam/errors.hpp"

namespace pam {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr long kChunk = 8192;

struct Welford {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double d = v - mean;
    mean += d / n;
    m2 += d * (v - mean);
  }
  void merge(const Welford& o) {
    if (o.n == 0) return;
    const long total = n + o.n;
    const double d = o.mean - mean;
    mean += d * o.n / total;
    m2 += o.m2 + d * d * (double(n) * o.n / total);
    n = total;
  }
  double stderr() const { return n > 1 ? std::sqrt(m2 / (n - 1) / n) : 0.0; }
};

using Rng = std::mt19937_64;

// Fixed-size chunks, each with its own seed-derived stream; results are
// merged in chunk order, so the worker count never changes the output.
template <std::size_t K, class Fn>
std::array<Welford, K> run_chunks(long samples, int workers, std::uint64_t seed, Fn fn) {
  const long chunks = (samples + kChunk - 1) / kChunk;
  std::vector<std::array<Welford, K>> parts(chunks);
  auto work = [&](int w) {
    for (long c = w; c < chunks; c += workers) {
      std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(c),
                        std::uint32_t(c >> 32)};
      Rng rng(seq);
      const long count = std::min(kChunk, samples - c * kChunk);
      for (long i = 0; i < count; ++i) fn(rng, parts[c]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  std::array<Welford, K> out{};
  for (const auto& p : parts) {
    for (std::size_t k = 0; k < K; ++k) out[k].merge(p[k]);
  }
  return out;
}

EstimatorResult to_result(const Welford& w, std::uint64_t seed, const McBudget& budget) {
  EstimatorResult r{w.mean, w.stderr(), w.n, seed, false};
  r.flagged = !(r.stderr <= budget.target_rel_stderr * std::abs(r.mean));
  return r;
}

void check_budget(const McBudget& budget) {
  if (budget.samples < 2) throw DomainError("mc: samples must be >= 2");
  if (budget.workers < 1) throw DomainError("mc: workers must be >= 1");
}

double uniform_open(Rng& rng) {
  // (0, 1]
  return 1.0 - std::generate_canonical<double, 53>(rng);
}

// Law of (X_{r_1}, ..., X_{r_n}) under the measure-weighted chain: a Brownian
// bridge ending at x at time t, started from μ_0 (Dirac: at x0 at time 0;
// Gaussian: at the mean at time -variance; Lebesgue: run backward from x).
struct Bridge {
  double t = 1.0;
  double x = 0.0;
  double origin = 0.0;
  double v = 0.0;
  bool lebesgue = false;
  double J0 = 1.0;

  double cov(double r, double s) const {
    if (lebesgue) return t - std::max(r, s);
    return std::min(r, s) + v - (r + v) * (s + v) / (t + v);
  }
  double mean(double r) const {
    if (lebesgue) return x;
    return origin + (x - origin) * (r + v) / (t + v);
  }
};

Bridge make_bridge(double t, double x, const InitialMeasure& measure) {
  Bridge b;
  b.t = t;
  b.x = x;
  if (const auto* d = std::get_if<DiracAt>(&measure)) {
    b.origin = d->x0;
  } else if (const auto* g = std::get_if<GaussianDensity>(&measure)) {
    b.origin = g->mean;
    b.v = g->variance;
  } else if (std::holds_alternative<LebesgueConstant>(measure)) {
    b.lebesgue = true;
  } else {
    throw DomainError("mc: measure must be dirac, gaussian or lebesgue, got " +
                      measure_name(measure));
  }
  b.J0 = j0(t, x, measure);
  return b;
}

struct Moments {
  Eigen::MatrixXd cov;
  Eigen::VectorXd mean;
};

Moments bridge_moments(const Bridge& b, std::span<const double> r) {
  const auto n = static_cast<Eigen::Index>(r.size());
  Moments m{Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    m.mean(i) = b.mean(r[i]);
    for (Eigen::Index j = 0; j < n; ++j) m.cov(i, j) = b.cov(r[i], r[j]);
  }
  return m;
}

// Same law from the product of heat kernels: sort the times, build the
// tridiagonal precision of the chain, invert, and undo the sort.
Moments chain_moments(const Bridge& b, std::span<const double> r) {
  const auto n = static_cast<Eigen::Index>(r.size());
  std::vector<Eigen::Index> order(n);
  for (Eigen::Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return r[i] < r[j]; });

  std::vector<double> inv_gap(n + 1);
  inv_gap[0] = b.lebesgue ? 0.0 : 1.0 / (r[order[0]] + b.v);
  for (Eigen::Index k = 1; k < n; ++k) inv_gap[k] = 1.0 / (r[order[k]] - r[order[k - 1]]);
  inv_gap[n] = 1.0 / (b.t - r[order[n - 1]]);

  Eigen::MatrixXd precision = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd linear = Eigen::VectorXd::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    precision(k, k) = inv_gap[k] + inv_gap[k + 1];
    if (k + 1 < n) precision(k, k + 1) = precision(k + 1, k) = -inv_gap[k + 1];
  }
  linear(0) += b.lebesgue ? 0.0 : b.origin * inv_gap[0];
  linear(n - 1) += b.x * inv_gap[n];

  const Eigen::LDLT<Eigen::MatrixXd> ldlt(precision);
  const Eigen::MatrixXd sorted_cov = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::VectorXd sorted_mean = ldlt.solve(linear);

  Moments m{Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    m.mean(order[i]) = sorted_mean(i);
    for (Eigen::Index j = 0; j < n; ++j) m.cov(order[i], order[j]) = sorted_cov(i, j);
  }
  return m;
}

// ∫_R |ξ|^β cos(dξ) exp(-Aξ²/2) dξ
double spectral_1d(double beta, double A, double d) {
  const double h = 0.5 * (beta + 1);
  double v = std::tgamma(h) * std::pow(2 / A, h);
  if (d != 0.0) v *= boost::math::hypergeometric_1F1(h, 0.5, -d * d / (2 * A));
  return v;
}

// One-draw estimate of ∫ Π|ξ_j|^β cos(ξ·d) exp(-ξᵀAξ/2) dξ from z ~ N(0, I):
// ξ = L^{-T} z has covariance A^{-1} when A = L Lᵀ.
double spectral_draw(double beta, const Eigen::MatrixXd& A, const Eigen::VectorXd& d,
                     const Eigen::VectorXd& z) {
  const Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) return 0.0;
  const Eigen::MatrixXd& L = llt.matrixL().toDenseMatrix();
  const Eigen::VectorXd xi = L.transpose().triangularView<Eigen::Upper>().solve(z);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) log_det += 2 * std::log(L(i, i));
  double w = std::pow(2 * kPi, 0.5 * A.rows()) * std::exp(-0.5 * log_det) * std::cos(xi.dot(d));
  for (Eigen::Index i = 0; i < xi.size(); ++i) w *= std::pow(std::abs(xi(i)), beta);
  return w;
}

Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
  return z;
}

// Pair (u, s): u ~ t Beta(a, a) covers the endpoint singularities of the
// bridge variances, s = u ± t V^{1/(γ+1)} covers |u - s|^γ.
class PairSampler {
 public:
  PairSampler(double t, double a, double gamma)
      : t_(t), a_(a), gamma_(gamma),
        log_norm_(std::log(boost::math::beta(a, a)) + (2 * a - 1) * std::log(t)) {}

  void draw(Rng& rng, double& u, double& s) const {
    // A fresh distribution per draw: libstdc++ caches state in it, which
    // would couple chunks.
    std::gamma_distribution<double> ga(a_, 1.0);
    double frac = 0.0;
    do {
      const double g1 = ga(rng);
      const double g2 = ga(rng);
      frac = g1 / (g1 + g2);
    } while (!(frac > 0.0 && frac < 1.0));
    u = t_ * frac;
    const double off = t_ * std::pow(uniform_open(rng), 1 / (gamma_ + 1));
    s = std::uniform_int_distribution<int>(0, 1)(rng) ? u + off : u - off;
  }

  double pdf(double u, double s) const {
    if (!(u > 0 && u < t_)) return 0.0;
    const double off = std::abs(u - s);
    if (!(off < t_)) return 0.0;
    const double pu = std::exp((a_ - 1) * (std::log(u) + std::log(t_ - u)) - log_norm_);
    return pu * (gamma_ + 1) / (2 * std::pow(t_, gamma_ + 1)) * std::pow(off, gamma_);
  }

 private:
  double t_;
  double a_;
  double gamma_;
  double log_norm_;
};

// Radial density ∝ r^{-κ} on the disk of radius R, for (t_2 - t_1, s_2 - s_1)
// near the set {t_1 = t_2, s_1 = s_2} where the ξ covariance degenerates.
class DiskSampler {
 public:
  DiskSampler(double R, double kappa) : R_(R), kappa_(kappa) {}

  void draw(Rng& rng, double& da, double& db) const {
    const double r = R_ * std::pow(uniform_open(rng), 1 / (2 - kappa_));
    const double phi = 2 * kPi * std::generate_canonical<double, 53>(rng);
    da = r * std::cos(phi);
    db = r * std::sin(phi);
  }

  double pdf(double da, double db) const {
    const double r = std::hypot(da, db);
    if (!(r < R_)) return 0.0;
    return (2 - kappa_) / (2 * kPi * std::pow(R_, 2 - kappa_)) * std::pow(r, -kappa_);
  }

 private:
  double R_;
  double kappa_;
};

bool inside(double r, double t) { return r > 0 && r < t; }

void require_time(double t) {
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("mc: t must be > 0");
}

}  // namespace

double NoiseSpec::spectral_weight(double xi) const {
  return params.c_H() * std::pow(std::abs(xi), 1 - 2 * params.H());
}

double NoiseSpec::temporal_weight(double dt) const {
  return params.alpha_H0() * std::pow(std::abs(dt), 2 * params.H0() - 2);
}

double kernel_f_n(std::span<const double> times, std::span<const double> points, double t,
                  double x, const InitialMeasure& measure) {
  require_time(t);
  if (times.size() != points.size() || times.empty()) {
    throw DomainError("kernel_f_n: times and points must have equal length n >= 1");
  }
  const std::size_t n = times.size();
  if (!(times[0] > 0)) return 0.0;
  for (std::size_t j = 1; j < n; ++j) {
    if (!(times[j] > times[j - 1])) return 0.0;
  }
  if (!(times[n - 1] < t)) return 0.0;
  double v = j0(times[0], points[0], measure);
  for (std::size_t j = 0; j < n; ++j) {
    const double tn = j + 1 < n ? times[j + 1] : t;
    const double xn = j + 1 < n ? points[j + 1] : x;
    v *= heat_kernel(tn - times[j], xn - points[j]);
  }
  return v;
}

double chaos_norm_prefactor(int n, const FractionalParams& params) {
  return std::pow(params.alpha_H0(), n) / std::tgamma(n + 1.0);
}

EstimatorResult chaos_norm_estimate(int n, double t, double x, const FractionalParams& params,
                                    const InitialMeasure& measure, const McBudget& budget,
                                    std::uint64_t seed, KernelRoute route) {
  if (n < 1 || n > 2) throw SizeError("chaos_norm_estimate: n must be 1 or 2");
  require_time(t);
  check_budget(budget);
  const Bridge bridge = make_bridge(t, x, measure);
  const double beta = 1 - 2 * params.H();
  const double gamma = 2 * params.H0() - 2;
  const double nfact = std::tgamma(n + 1.0);
  const double cH_n = std::pow(params.c_H(), n);
  const double J0sq = bridge.J0 * bridge.J0;

  auto moments = [&](std::span<const double> r) {
    return route == KernelRoute::BridgeCovariance ? bridge_moments(bridge, r)
                                                  : chain_moments(bridge, r);
  };
  // ∫ μ(dξ) F(t) conj F(s) divided by J_0², given one ξ draw (n = 2) or exactly (n = 1).
  auto spectral = [&](std::span<const double> ts, std::span<const double> ss, Rng& rng) {
    const Moments mt = moments(ts);
    const Moments ms = moments(ss);
    const Eigen::MatrixXd A = mt.cov + ms.cov;
    const Eigen::VectorXd d = mt.mean - ms.mean;
    if (n == 1) return cH_n * spectral_1d(beta, A(0, 0), d(0));
    return cH_n * spectral_draw(beta, A, d, gaussian_vector(rng, n));
  };
  // E|J_n|² = (α^n/n!) ∫∫ Π|t_j-s_j|^γ ψ, with ψ = (n!)² ∫μ F f̃(t) conj F f̃(s).
  // BridgeCovariance evaluates n! F f̃ = J_0 exp(...) directly; SortedChain goes
  // through F f̃ = (1/n!) F f_n(sorted) and n! ||f̃_n||².
  auto density = [&](std::span<const double> ts, std::span<const double> ss, Rng& rng) {
    const double I = spectral(ts, ss, rng);
    if (route == KernelRoute::BridgeCovariance) {
      const double psi = J0sq * I;
      return chaos_norm_prefactor(n, params) * psi;
    }
    const double ff = J0sq * I / (nfact * nfact);
    return nfact * std::pow(params.alpha_H0(), n) * ff;
  };

  const PairSampler pair(t, params.H(), gamma);
  const DiskSampler disk(t, 0.5 * (3 - 4 * params.H()));

  auto sample = [&](Rng& rng, std::array<Welford, 1>& acc) {
    std::array<double, 2> ts{};
    std::array<double, 2> ss{};
    pair.draw(rng, ts[0], ss[0]);
    double q = pair.pdf(ts[0], ss[0]);
    if (n == 2) {
      const bool near = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
      if (near) {
        double da = 0.0;
        double db = 0.0;
        disk.draw(rng, da, db);
        ts[1] = ts[0] + da;
        ss[1] = ss[0] + db;
      } else {
        pair.draw(rng, ts[1], ss[1]);
      }
      q *= 0.5 * pair.pdf(ts[1], ss[1]) + 0.5 * disk.pdf(ts[1] - ts[0], ss[1] - ss[0]);
    }
    double w = 0.0;
    bool ok = q > 0;
    for (int j = 0; j < n && ok; ++j) ok = inside(ts[j], t) && inside(ss[j], t);
    if (ok) {
      double kernel = 1.0;
      for (int j = 0; j < n; ++j) kernel *= std::pow(std::abs(ts[j] - ss[j]), gamma);
      w = kernel / q * density(std::span(ts).first(n), std::span(ss).first(n), rng);
    }
    acc[0].add(w);
  };
  const auto acc = run_chunks<1>(budget.samples, budget.workers, seed, sample);
  return to_result(acc[0], seed, budget);
}

EstimatorResult psi_estimate(std::span<const double> ts, std::span<const double> ss, double t,
                             double x, const FractionalParams& params,
                             const InitialMeasure& measure, const McBudget& budget,
                             std::uint64_t seed) {
  require_time(t);
  if (ts.size() != ss.size() || ts.empty() || ts.size() > 2) {
    throw SizeError("psi_estimate: need two time vectors of equal length 1 or 2");
  }
  check_budget(budget);
  const Bridge bridge = make_bridge(t, x, measure);
  const double beta = 1 - 2 * params.H();
  const auto n = static_cast<int>(ts.size());
  const double scale = bridge.J0 * bridge.J0 * std::pow(params.c_H(), n);
  const Moments mt = bridge_moments(bridge, ts);
  const Moments ms = bridge_moments(bridge, ss);
  const Eigen::MatrixXd A = mt.cov + ms.cov;
  const Eigen::VectorXd d = mt.mean - ms.mean;
  if (n == 1) {
    return EstimatorResult{scale * spectral_1d(beta, A(0, 0), d(0)), 0.0, 0, seed, false};
  }
  auto sample = [&](Rng& rng, std::array<Welford, 1>& acc) {
    acc[0].add(scale * spectral_draw(beta, A, d, gaussian_vector(rng, n)));
  };
  const auto acc = run_chunks<1>(budget.samples, budget.workers, seed, sample);
  return to_result(acc[0], seed, budget);
}

Lemma32Check verify_lemma32(int n, std::span<const double> ordered_times, double t, double x,
                            const FractionalParams& params, const InitialMeasure& measure,
                            const McBudget& budget, std::uint64_t seed) {
  if (n < 1 || n > 2 || static_cast<int>(ordered_times.size()) != n) {
    throw SizeError("verify_lemma32: n must be 1 or 2 and match the number of times");
  }
  require_time(t);
  check_budget(budget);
  if (!(ordered_times[0] > 0) || !(ordered_times[n - 1] < t)) {
    throw DomainError("verify_lemma32: times must lie in (0, t)");
  }
  for (int j = 1; j < n; ++j) {
    if (!(ordered_times[j] > ordered_times[j - 1])) {
      throw DomainError("verify_lemma32: times must be strictly increasing");
    }
  }
  const Bridge bridge = make_bridge(t, x, measure);
  const double beta = 1 - 2 * params.H();
  const double scale = bridge.J0 * bridge.J0 * std::pow(params.c_H(), n);

  // ψ(t, t) = J_0² ∫ μ(dξ) exp(-ξᵀKξ): Gaussian weight with matrix 2K.
  const Eigen::MatrixXd A_lhs = 2 * bridge_moments(bridge, ordered_times).cov;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double tk = ordered_times[k];
    const double tn = k + 1 < n ? ordered_times[k + 1] : t;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    for (int j = 0; j <= k; ++j) v(j) = ordered_times[j];
    M += (tn - tk) / (tn * tk) * v * v.transpose();
  }
  const Eigen::MatrixXd A_rhs = 2 * M;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);

  auto sample = [&](Rng& rng, std::array<Welford, 3>& acc) {
    const Eigen::VectorXd z = gaussian_vector(rng, n);
    const double l = scale * spectral_draw(beta, A_lhs, zero, z);
    const double r = scale * spectral_draw(beta, A_rhs, zero, z);
    acc[0].add(l);
    acc[1].add(r);
    acc[2].add(l - r);
  };
  const auto acc = run_chunks<3>(budget.samples, budget.workers, seed, sample);
  Lemma32Check out;
  out.lhs = to_result(acc[0], seed, budget);
  out.rhs = to_result(acc[1], seed, budget);
  out.diff_stderr = acc[2].stderr();
  out.pass = std::isfinite(out.lhs.mean) && std::isfinite(out.rhs.mean) &&
             out.lhs.mean <= out.rhs.mean + 3 * out.diff_stderr + 1e-12 * std::abs(out.rhs.mean);
  return out;
}

TermBoundCheck verify_term_bound(int n, double t, double x, const FractionalParams& params,
                                 const InitialMeasure& measure, const McBudget& budget,
                                 std::uint64_t seed) {
  TermBoundCheck out;
  out.estimate = chaos_norm_estimate(n, t, x, params, measure, budget, seed);
  const double J0 = j0(t, x, measure);
  out.bound = J0 * J0 * std::exp(term_bound(n, t, params, BoundMode::ExactConstants).log_bound);
  out.b_H0 = params.b_H0();
  const double needed = out.estimate.mean - 3 * out.estimate.stderr;
  out.b_min = needed > 0 ? params.b_H0() * std::pow(needed / out.bound, 1.0 / n) : 0.0;
  out.pass = out.estimate.mean <= out.bound + 3 * out.estimate.stderr;
  return out;
}

}  // namespace pam
