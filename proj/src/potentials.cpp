#include "qesband/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qesband/errors.hpp"

namespace qesband {

PotentialParams PotentialParams::make(int twice_a, double b, double m) {
  if (twice_a < 0) throw DomainError("a must be a non-negative integer or half-integer");
  if (!std::isfinite(b)) throw DomainError("b must be finite");
  if (!(m >= 0.0 && m <= 1.0)) throw DomainError("m must lie in [0, 1]");
  PotentialParams p;
  p.twice_a = twice_a;
  p.b = b;
  p.m = m;
  p.K = m < 1.0 ? elliptic::complete_elliptic_k(m) : std::numeric_limits<double>::infinity();
  p.period = 4.0 * p.K;
  return p;
}

double v_elliptic(double x, const PotentialParams& p) {
  if (p.m >= 1.0) throw DomainError("v_elliptic requires m < 1; use v_dshg / v_hyperbolic at m = 1");
  const auto e = elliptic::jacobi_point(x, p.m);
  const double a = p.a();
  const double d2 = e.dn * e.dn;
  return (0.25 * p.b * p.b - p.m * (1.0 - p.m) * a * (a + 1.0)) * e.sn * e.sn / d2 - p.b * (a + 0.5) * e.cn / d2;
}

double v_dsg(double x, double a, double b) {
  const double s = std::sin(x);
  return 0.25 * b * b * s * s - b * (a + 0.5) * std::cos(x);
}

double v_dshg(double x, double a, double b) {
  const double s = std::sinh(x);
  return 0.25 * b * b * s * s - b * (a + 0.5) * std::cosh(x);
}

double v_hyperbolic(double x, double a, double beta) {
  const double sech = 1.0 / std::cosh(x);
  return (0.25 * beta * beta - a * (a + 1.0)) * sech * sech - beta * (a + 0.5) * sech * std::tanh(x);
}

double v_companion(double x, const CompanionParams& c) {
  if (!(c.m >= 0.0 && c.m <= 1.0)) throw DomainError("m must lie in [0, 1]");
  const auto e = elliptic::jacobi_point(x, c.m);
  const double a = c.a();
  return (0.25 * c.beta * c.beta - c.m * a * (a + 1.0)) * e.cn * e.cn + c.beta * (a + 0.5) * e.sn * e.dn;
}

namespace {

double gauge_exponent_at(double cn, const PotentialParams& p) {
  if (p.m >= 1.0) throw DomainError("gauge factor requires m < 1");
  if (p.b == 0.0) return 0.0;
  const double m = p.m;
  if (m < kGaugeSwitch) {
    const double m1 = 1.0 - m;
    return 0.5 * p.b * (cn / m1 - m * cn * cn * cn / (3.0 * m1 * m1));
  }
  const double scale = p.b / (2.0 * std::sqrt(m * (1.0 - m)));
  if (1.0 - m < kGaugeSwitch) {
    // atan(z) - pi/2 = -atan2(1, z), continuous across cn = 0
    return -scale * std::atan2(std::sqrt(1.0 - m), std::sqrt(m) * cn);
  }
  const double z = std::sqrt(m / (1.0 - m)) * cn;
  double angle;
  if (std::abs(z) > 1.0)
    angle = std::copysign(0.5 * std::numbers::pi, z) - std::atan(1.0 / z);
  else
    angle = std::atan(z);
  return scale * angle;
}

}  // namespace

double gauge_exponent(double x, const PotentialParams& p) {
  if (p.m >= 1.0) throw DomainError("gauge factor requires m < 1");
  return gauge_exponent_at(elliptic::jacobi_point(x, p.m).cn, p);
}

double gauge_factor(double x, const PotentialParams& p) { return std::exp(gauge_exponent(x, p)); }

double WavefunctionLayers::gauge(double x) const { return gauge_factor(x + shift, params); }

double WavefunctionLayers::dn_power(double x) const {
  const auto e = elliptic::jacobi_point(x + shift, params.m);
  return std::pow(e.dn, -params.a());
}

double WavefunctionLayers::u(double x) const {
  return sector_value(sector.tag, coeffs, elliptic::jacobi_point(x + shift, params.m));
}

double assemble_psi(const WavefunctionLayers& layers, double x) {
  const double xs = x + layers.shift;
  const auto e = elliptic::jacobi_point(xs, layers.params.m);
  return std::exp(gauge_exponent_at(e.cn, layers.params)) * std::pow(e.dn, -layers.params.a()) *
         sector_value(layers.sector.tag, layers.coeffs, e);
}

double schrodinger_residual(const RealFunction& psi, const RealFunction& v, double E, double period, int points,
                            double h) {
  double worst = 0.0;
  double scale = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = period * i / points;
    const double f0 = psi(x);
    const double d2 = (-psi(x + 2.0 * h) + 16.0 * psi(x + h) - 30.0 * f0 + 16.0 * psi(x - h) - psi(x - 2.0 * h)) /
                      (12.0 * h * h);
    worst = std::max(worst, std::abs(d2 + (E - v(x)) * f0));
    scale = std::max(scale, std::abs(f0));
  }
  return scale > 0.0 ? worst / ((1.0 + std::abs(E)) * scale) : worst;
}

double periodicity_defect(const RealFunction& psi, double period, double sign, int points) {
  double worst = 0.0;
  double scale = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = period * (i + 0.25) / points;
    const double f = psi(x);
    worst = std::max(worst, std::abs(psi(x + period) - sign * f));
    scale = std::max(scale, std::abs(f));
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace qesband
