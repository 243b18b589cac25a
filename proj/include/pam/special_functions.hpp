#pragma once

#include <cmath>
#include <numbers>

#include "pam/errors.hpp"

namespace pam {

inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Strictly positive finite real, checked at construction.
class PositiveReal {
 public:
  explicit PositiveReal(double value) : value_(value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw DomainError("PositiveReal: value must be finite and > 0");
    }
  }
  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

/// ln Γ(x) for x > 0.
///
/// Taylor expansion around 1 and 2 keeps full relative accuracy near the
/// two zeros of ln Γ; elsewhere the argument is shifted to x >= 10 and the
/// Stirling series is used.
double log_gamma(PositiveReal x);

/// ψ(x) = Γ'(x)/Γ(x) for x > 0 (recurrence shift + asymptotic expansion).
double digamma(PositiveReal x);

/// ln[Γ(z+a)/Γ(z)]; requires z > 0, a >= 0.
double log_gamma_ratio(PositiveReal z, double a);

/// Γ(z+a)/Γ(z), evaluated in log space.
double gamma_ratio(PositiveReal z, double a);

/// ln n! for integer n >= 0.
inline double log_factorial(long n) {
  if (n < 0) throw DomainError("log_factorial: n < 0");
  if (n < 2) return 0.0;
  return log_gamma(PositiveReal(static_cast<double>(n) + 1.0));
}

/// log(exp(a) + exp(b)) without overflow.
inline double log_add_exp(double a, double b) {
  if (a == -INFINITY) return b;
  if (b == -INFINITY) return a;
  const double m = a > b ? a : b;
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace pam
