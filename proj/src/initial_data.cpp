#include "pam/initial_data.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "pam/errors.hpp"

namespace pam {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError("InitialMeasure: " + what);
}

QuadratureValue integrate_density(const CustomDensity& m,
                                  const std::function<double(double)>& weight) {
  boost::math::quadrature::sinh_sinh<double> integrator;
  double err = 0.0;
  auto f = [&](double y) {
    const double w = weight(y);
    return w == 0.0 ? 0.0 : w * m.density(y);
  };
  QuadratureValue r;
  r.value = integrator.integrate(f, 1e-10, &err);
  r.error_estimate = err;
  r.closed_form = false;
  return r;
}

}  // namespace

void validate(const InitialMeasure& measure) {
  std::visit(overloaded{
                 [](const DiracAt& m) { require(std::isfinite(m.x0), "dirac x0 must be finite"); },
                 [](const LebesgueConstant& m) {
                   require(m.c > 0 && std::isfinite(m.c), "lebesgue c must be > 0");
                 },
                 [](const PolynomialDensity&) {},
                 [](const GaussianDensity& m) {
                   require(std::isfinite(m.mean), "gaussian mean must be finite");
                   require(m.variance > 0 && std::isfinite(m.variance),
                           "gaussian variance must be > 0");
                 },
                 [](const FiniteAtoms& m) {
                   require(!m.atoms.empty(), "atoms must be non-empty");
                   for (const auto& [loc, mass] : m.atoms) {
                     require(std::isfinite(loc), "atom location must be finite");
                     require(mass > 0 && std::isfinite(mass), "atom mass must be > 0");
                   }
                 },
                 [](const CustomDensity& m) {
                   require(static_cast<bool>(m.density), "custom density missing");
                 },
             },
             measure);
}

std::string measure_name(const InitialMeasure& measure) {
  return std::visit(overloaded{
                        [](const DiracAt&) { return std::string("dirac"); },
                        [](const LebesgueConstant&) { return std::string("lebesgue"); },
                        [](const PolynomialDensity&) { return std::string("x2"); },
                        [](const GaussianDensity&) { return std::string("gaussian"); },
                        [](const FiniteAtoms&) { return std::string("atoms"); },
                        [](const CustomDensity& m) { return m.label; },
                    },
                    measure);
}

double log_heat_kernel(double t, double x) {
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("heat_kernel: t must be > 0");
  return -0.5 * std::log(2 * std::numbers::pi * t) - x * x / (2 * t);
}

double heat_kernel(double t, double x) { return std::exp(log_heat_kernel(t, x)); }

QuadratureValue j0_detailed(double t, double x, const InitialMeasure& measure) {
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("j0: t must be > 0");
  validate(measure);
  return std::visit(
      overloaded{
          [&](const DiracAt& m) { return QuadratureValue{heat_kernel(t, x - m.x0)}; },
          [&](const LebesgueConstant& m) { return QuadratureValue{m.c}; },
          // E(x + B_t)^2
          [&](const PolynomialDensity&) { return QuadratureValue{x * x + t}; },
          [&](const GaussianDensity& m) {
            return QuadratureValue{heat_kernel(t + m.variance, x - m.mean)};
          },
          [&](const FiniteAtoms& m) {
            double s = 0.0;
            for (const auto& [loc, mass] : m.atoms) s += mass * heat_kernel(t, x - loc);
            return QuadratureValue{s};
          },
          [&](const CustomDensity& m) {
            auto r = integrate_density(m, [&](double y) { return heat_kernel(t, x - y); });
            if (!std::isfinite(r.value)) throw DomainError("j0: custom density not integrable");
            return r;
          },
      },
      measure);
}

double j0(double t, double x, const InitialMeasure& measure) {
  return j0_detailed(t, x, measure).value;
}

QuadratureValue gaussian_moment(const InitialMeasure& measure, double a) {
  if (!(a > 0) || !std::isfinite(a)) throw DomainError("gaussian_moment: a must be > 0");
  validate(measure);
  const double pi = std::numbers::pi;
  return std::visit(
      overloaded{
          [&](const DiracAt& m) { return QuadratureValue{std::exp(-a * m.x0 * m.x0)}; },
          [&](const LebesgueConstant& m) { return QuadratureValue{m.c * std::sqrt(pi / a)}; },
          [&](const PolynomialDensity&) {
            return QuadratureValue{0.5 * std::sqrt(pi) * std::pow(a, -1.5)};
          },
          [&](const GaussianDensity& m) {
            const double s = 1 + 2 * a * m.variance;
            return QuadratureValue{std::exp(-a * m.mean * m.mean / s) / std::sqrt(s)};
          },
          [&](const FiniteAtoms& m) {
            double s = 0.0;
            for (const auto& [loc, mass] : m.atoms) s += mass * std::exp(-a * loc * loc);
            return QuadratureValue{s};
          },
          [&](const CustomDensity& m) {
            return integrate_density(m, [&](double y) { return std::exp(-a * y * y); });
          },
      },
      measure);
}

std::optional<CondMu0Violation> check_cond_mu0(const InitialMeasure& measure,
                                               std::span<const double> a_grid) {
  validate(measure);
  for (double a : a_grid) {
    if (!(a > 0) || !std::isfinite(a)) throw DomainError("check_cond_mu0: a must be > 0");
    double v = INFINITY;
    try {
      v = gaussian_moment(measure, a).value;
    } catch (const std::exception&) {
      // Quadrature failure (divergent integral) counts as a violation.
    }
    if (!std::isfinite(v)) return CondMu0Violation{a, v};
  }
  return std::nullopt;
}

}  // namespace pam
