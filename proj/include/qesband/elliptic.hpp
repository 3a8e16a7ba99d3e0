#pragma once

// Jacobi elliptic functions sn, cn, dn and the complete integral K(m),
// computed with the arithmetic-geometric mean / descending Landen
// transformation. Parameter convention: m = k^2, 0 <= m <= 1.

namespace qesband::elliptic {

/// Below this m the trigonometric forms replace the Landen recursion. Near
/// m = 1 the recursion stays accurate (tanh/sech forms would break down
/// once |x| exceeds K), so the hyperbolic forms are used at m = 1 only.
inline constexpr double kModulusSwitch = 1e-12;

/// One evaluation of the Jacobi functions at (x, m). `am` is the unwrapped
/// amplitude: continuous and increasing in x, am(x + 4K) = am(x) + 2 pi.
struct EllipticPoint {
  double x = 0.0;
  double sn = 0.0;
  double cn = 1.0;
  double dn = 1.0;
  double am = 0.0;
};

/// K(m) for 0 <= m < 1; DomainError otherwise (K diverges at m = 1).
double complete_elliptic_k(double m);

/// sn, cn, dn, am at (x, m), m in [0, 1]. At m = 0 this is
/// (sin x, cos x, 1, x); at m = 1 (tanh x, sech x, sech x, gd x).
EllipticPoint jacobi_point(double x, double m);

struct HalfAngle {
  double cos_half = 1.0;
  double sin_half = 0.0;
};

/// (cos(am/2), sin(am/2)): the smooth branches of sqrt((1 + cn)/2) and
/// sqrt((1 - cn)/2). Both change sign every 4K, so they are antiperiodic
/// over 4K.
HalfAngle half_angle_factors(const EllipticPoint& p);

}  // namespace qesband::elliptic
