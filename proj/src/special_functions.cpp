#include "pam/special_functions.hpp"

#include <array>
#include <cmath>

namespace pam {
namespace {

// zeta(k) - 1 for k = 2..30.
constexpr std::array<double, 29> kZetaMinusOne = {
    0.64493406684822643647,     0.2020569031595942854,
    0.082323233711138191516,    0.036927755143369926331,
    0.017343061984449139715,    0.0083492773819228268398,
    0.0040773561979443393787,   0.0020083928260822144179,
    0.00099457512781808533715,  0.0004941886041194645587,
    0.00024608655330804829864,  0.00012271334757848914675,
    6.1248135058704829259e-05,  3.0588236307020493552e-05,
    1.5282259408651871733e-05,  7.6371976378997622736e-06,
    3.8172932649998398565e-06,  1.9082127165539389257e-06,
    9.5396203387279611315e-07,  4.7693298678780646312e-07,
    2.3845050272773299e-07,     1.1921992596531107307e-07,
    5.9608189051259479612e-08,  2.9803503514652280186e-08,
    1.4901554828365041235e-08,  7.450711789835429492e-09,
    3.7253340247884570548e-09,  1.8626597235130490064e-09,
    9.3132743241966818287e-10,
};

constexpr double kHalfLog2Pi = 0.91893853320467274178;
constexpr double kTaylorRadius = 0.25;
constexpr double kAsymptoticStart = 10.0;

// ln Γ(1+z) for |z| <= kTaylorRadius:
//   -γz + z - log1p(z) + Σ_{k>=2} (-1)^k (ζ(k)-1) z^k / k
double log_gamma_1p_small(double z) {
  double sum = 0.0;
  double zk = z;
  for (std::size_t i = 0; i < kZetaMinusOne.size(); ++i) {
    zk *= z;
    const int k = static_cast<int>(i) + 2;
    const double term = kZetaMinusOne[i] * zk / k;
    sum += (k % 2 == 0) ? term : -term;
  }
  return -kEulerGamma * z + (z - std::log1p(z)) + sum;
}

// Stirling series for x >= kAsymptoticStart.
double log_gamma_asymptotic(double x) {
  // B_{2k} / (2k (2k-1)), k = 1..8
  static constexpr std::array<double, 8> kCoef = {
      1.0 / 12.0,          -1.0 / 360.0,         1.0 / 1260.0,
      -1.0 / 1680.0,       1.0 / 1188.0,         -691.0 / 360360.0,
      1.0 / 156.0,         -3617.0 / 122400.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double p = inv;
  for (double c : kCoef) {
    series += c * p;
    p *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError(what);
}

}  // namespace

double log_gamma(PositiveReal px) {
  const double x = px.value();
  if (std::abs(x - 1.0) <= kTaylorRadius) return log_gamma_1p_small(x - 1.0);
  if (std::abs(x - 2.0) <= kTaylorRadius) {
    const double z = x - 2.0;
    return log_gamma_1p_small(z) + std::log1p(z);
  }
  if (x < 1.0 - kTaylorRadius) {
    // Γ(x) = Γ(x+1)/x; x+1 lands in [1, 1.75).
    return log_gamma(PositiveReal(x + 1.0)) - std::log(x);
  }
  if (x >= kAsymptoticStart) return log_gamma_asymptotic(x);
  // 1.25 < x < 10, away from the zero at 2: shift up and divide out.
  double shifted = x;
  double product = 1.0;
  while (shifted < kAsymptoticStart) {
    product *= shifted;
    shifted += 1.0;
  }
  return log_gamma_asymptotic(shifted) - std::log(product);
}

double digamma(PositiveReal px) {
  double x = px.value();
  double acc = 0.0;
  while (x < kAsymptoticStart) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // ψ(x) ~ ln x - 1/(2x) - Σ B_{2k}/(2k x^{2k})
  static constexpr std::array<double, 7> kCoef = {
      1.0 / 12.0,   -1.0 / 120.0, 1.0 / 252.0,   -1.0 / 240.0,
      1.0 / 132.0,  -691.0 / 32760.0, 1.0 / 12.0,
  };
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double p = inv2;
  for (double c : kCoef) {
    series += c * p;
    p *= inv2;
  }
  return acc + std::log(x) - 0.5 / x - series;
}

double log_gamma_ratio(PositiveReal z, double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw DomainError("gamma_ratio: a must be finite and >= 0");
  }
  if (a == 0.0) return 0.0;
  return log_gamma(PositiveReal(z.value() + a)) - log_gamma(z);
}

double gamma_ratio(PositiveReal z, double a) {
  require_positive(z.value(), "gamma_ratio: z must be > 0");
  return std::exp(log_gamma_ratio(z, a));
}

}  // namespace pam
