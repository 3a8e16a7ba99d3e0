#include "qesband/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "qesband/errors.hpp"

namespace qesband::elliptic {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxAgmSteps = 40;

void check_modulus(double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw DomainError("elliptic parameter m must lie in [0, 1]");
}

// AGM sequences a_n and c_n = (a_{n-1} - b_{n-1}) / 2 starting from
// (1, sqrt(1 - m), sqrt(m)).
struct AgmTable {
  std::array<double, kMaxAgmSteps + 1> a{};
  std::array<double, kMaxAgmSteps + 1> c{};
  int steps = 0;
};

AgmTable agm_table(double m) {
  AgmTable t;
  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  t.a[0] = a;
  t.c[0] = std::sqrt(m);
  int n = 0;
  while (n < kMaxAgmSteps) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    ++n;
    t.a[n] = a;
    t.c[n] = c;
    if (std::abs(c) <= kEps * a) break;
  }
  t.steps = n;
  return t;
}

double quarter_period(const AgmTable& t) { return std::numbers::pi / (2.0 * t.a[t.steps]); }

}  // namespace

double complete_elliptic_k(double m) {
  if (!(m >= 0.0 && m < 1.0)) throw DomainError("complete_elliptic_k requires 0 <= m < 1");
  return quarter_period(agm_table(m));
}

EllipticPoint jacobi_point(double x, double m) {
  if (!std::isfinite(x)) throw DomainError("jacobi_point: non-finite argument");
  check_modulus(m);
  EllipticPoint p;
  p.x = x;
  if (m < kModulusSwitch) {
    p.sn = std::sin(x);
    p.cn = std::cos(x);
    p.dn = std::sqrt(p.cn * p.cn + (1.0 - m) * p.sn * p.sn);
    p.am = x;
    return p;
  }
  if (m == 1.0) {
    p.sn = std::tanh(x);
    p.cn = 1.0 / std::cosh(x);
    p.dn = p.cn;
    p.am = std::atan(std::sinh(x));
    return p;
  }

  const AgmTable t = agm_table(m);
  const double period = 4.0 * quarter_period(t);
  const double turns = std::floor(x / period);
  const double r = x - turns * period;

  // Descending Landen: phi_N = 2^N a_N r, then
  // phi_{n-1} = (phi_n + asin(c_n / a_n * sin phi_n)) / 2.
  double phi = std::ldexp(t.a[t.steps] * r, t.steps);
  for (int n = t.steps; n >= 1; --n) {
    phi = 0.5 * (phi + std::asin(t.c[n] / t.a[n] * std::sin(phi)));
  }
  p.sn = std::sin(phi);
  p.cn = std::cos(phi);
  // dn^2 = cn^2 + (1 - m) sn^2 has no cancellation as m -> 1.
  p.dn = std::sqrt(p.cn * p.cn + (1.0 - m) * p.sn * p.sn);
  p.am = phi + 2.0 * std::numbers::pi * turns;
  return p;
}

HalfAngle half_angle_factors(const EllipticPoint& p) {
  return {std::cos(0.5 * p.am), std::sin(0.5 * p.am)};
}

}  // namespace qesband::elliptic
