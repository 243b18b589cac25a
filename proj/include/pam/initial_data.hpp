#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pam {

struct DiracAt {
  double x0 = 0.0;
};

struct LebesgueConstant {
  double c = 1.0;
};

/// Density y², the growing-tail example.
struct PolynomialDensity {};

struct GaussianDensity {
  double mean = 0.0;
  double variance = 1.0;
};

struct FiniteAtoms {
  std::vector<std::pair<double, double>> atoms;  // (location, mass)
};

/// Escape hatch: any nonnegative density, integrated numerically. Results
/// are flagged as quadrature-based.
struct CustomDensity {
  std::function<double(double)> density;
  std::string label = "custom";
};

using InitialMeasure = std::variant<DiracAt, LebesgueConstant, PolynomialDensity,
                                    GaussianDensity, FiniteAtoms, CustomDensity>;

/// Throws ValidationError on negative/zero masses, non-positive c or
/// variance, empty atom lists, non-finite parameters or a missing density.
void validate(const InitialMeasure& measure);

std::string measure_name(const InitialMeasure& measure);

/// G(t, x) = (2πt)^{-1/2} exp(-x²/(2t)).
double heat_kernel(double t, double x);
double log_heat_kernel(double t, double x);

struct QuadratureValue {
  double value = 0.0;
  double error_estimate = 0.0;
  bool closed_form = true;  ///< false: numerical fallback
};

/// J_0(t, x) = ∫ G(t, x - y) μ_0(dy).
QuadratureValue j0_detailed(double t, double x, const InitialMeasure& measure);
double j0(double t, double x, const InitialMeasure& measure);

/// ∫ exp(-a y²) μ_0(dy), a > 0.
QuadratureValue gaussian_moment(const InitialMeasure& measure, double a);

struct CondMu0Violation {
  double a = 0.0;
  double value = 0.0;
};

/// Evaluates ∫ exp(-a y²) μ_0(dy) at each grid point; nullopt when all are
/// finite.
std::optional<CondMu0Violation> check_cond_mu0(const InitialMeasure& measure,
                                               std::span<const double> a_grid);

}  // namespace pam
