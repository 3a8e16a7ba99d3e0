#pragma once

// The elliptic band potential
//
//   V(x) = [b^2/4 - m(1-m) a(a+1)] sn^2/dn^2 - b(a + 1/2) cn/dn^2
//
// together with its m -> 0 / m -> 1 relatives and the factors that turn a
// sector solution u(x) into a Schroedinger eigenfunction
//
//   psi(x) = G(x) dn(x)^(-a) u(x).
//
// Units: hbar = 2m = 1, i.e. psi'' + (E - V) psi = 0.

#include <functional>
#include <vector>

#include "qesband/sector.hpp"

namespace qesband {

/// (a, b, m) for the elliptic potential; a = twice_a / 2.
struct PotentialParams {
  int twice_a = 0;
  double b = 0.0;
  double m = 0.0;
  double K = 0.0;       // quarter period K(m); +inf at m = 1
  double period = 0.0;  // 4K

  /// Validates twice_a >= 0, finite b, m in [0, 1]. m = 1 is accepted for
  /// limit evaluations only (K = inf).
  static PotentialParams make(int twice_a, double b, double m);

  double a() const { return 0.5 * twice_a; }
  bool integer_a() const { return twice_a % 2 == 0; }
  /// 2a + 1, the number of algebraic band edges.
  int level_count() const { return twice_a + 1; }
};

/// Parameters (a, beta, m) of the companion potential
///   [beta^2/4 - m a(a+1)] cn^2 + beta (a + 1/2) sn dn.
struct CompanionParams {
  int twice_a = 0;
  double beta = 0.0;
  double m = 0.0;

  double a() const { return 0.5 * twice_a; }
};

/// Elliptic potential, m in [0, 1). DomainError at m = 1.
double v_elliptic(double x, const PotentialParams& p);

/// b^2/4 sin^2 x - b(a + 1/2) cos x.
double v_dsg(double x, double a, double b);

/// b^2/4 sinh^2 x - b(a + 1/2) cosh x.
double v_dshg(double x, double a, double b);

/// [beta^2/4 - a(a+1)] sech^2 x - beta(a + 1/2) sech x tanh x.
double v_hyperbolic(double x, double a, double beta);

/// Companion potential. At m = 1 it equals v_hyperbolic(-x, a, beta):
/// the sn dn term carries the opposite sign to the sech tanh term.
double v_companion(double x, const CompanionParams& c);

/// Switch thresholds for the gauge factor series forms.
inline constexpr double kGaugeSwitch = 1e-10;

/// log G(x) = b / (2 sqrt(m(1-m))) * atan(sqrt(m/(1-m)) cn x), so that
/// G'/G = -(b/2) sn/dn. For m < kGaugeSwitch the two-term series in m is
/// used (at m = 0: (b/2) cos x). For 1 - m < kGaugeSwitch the divergent
/// x-independent constant b pi / (4 sqrt(m(1-m))) is dropped, leaving the
/// finite DSHG-type factor (about -(b/2) / cn for cn > 0).
double gauge_exponent(double x, const PotentialParams& p);

/// exp(gauge_exponent). Strictly positive, 4K-periodic.
double gauge_factor(double x, const PotentialParams& p);

/// Everything needed to evaluate psi = G dn^-a u at any real x. The
/// optional shift evaluates all layers at x + shift (used for the
/// half-period translated companion problem).
struct WavefunctionLayers {
  PotentialParams params;
  Sector sector;
  std::vector<double> coeffs;
  double shift = 0.0;

  double gauge(double x) const;
  double dn_power(double x) const;
  double u(double x) const;
};

double assemble_psi(const WavefunctionLayers& layers, double x);

using RealFunction = std::function<double(double)>;

/// max |psi'' + (E - V) psi| / ((1 + |E|) max |psi|) over `points`
/// uniformly spaced x in [0, period), psi'' by 5-point central differences.
double schrodinger_residual(const RealFunction& psi, const RealFunction& v, double E, double period,
                            int points = 1000, double h = 1e-3);

/// max |psi(x + period) - sign psi(x)| / max |psi| on `points` samples.
double periodicity_defect(const RealFunction& psi, double period, double sign, int points = 257);

}  // namespace qesband
