#pragma once

// Invariant function spaces of the transformed band-edge operator.
// Every basis function is a fixed prefactor times a power of cn:
//
//   IntegerEven  cn^k                 k = 0..n       (a = n)
//   IntegerOdd   sn cn^k              k = 0..n-1     (a = n)
//   HalfPlus     cos(am/2) cn^k       k = 0..n       (a = n + 1/2)
//   HalfMinus    sin(am/2) cn^k       k = 0..n       (a = n + 1/2)

#include <span>
#include <string_view>

#include "qesband/elliptic.hpp"

namespace qesband {

enum class SectorTag { IntegerEven, IntegerOdd, HalfPlus, HalfMinus };

struct Sector {
  SectorTag tag = SectorTag::IntegerEven;
  int dim = 1;

  friend bool operator==(const Sector&, const Sector&) = default;
};

/// Band edges of the integer sectors repeat after 4K; those of the
/// half-integer sectors change sign after 4K (period 8K).
enum class Periodicity { P4K, A4K };

std::string_view to_string(SectorTag tag);
std::string_view to_string(Periodicity p);

Periodicity periodicity_of(SectorTag tag);

bool is_half_integer_sector(SectorTag tag);

/// Value and first two x-derivatives of a function along the real line.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

Jet operator*(const Jet& f, const Jet& g);
Jet operator+(const Jet& f, const Jet& g);
Jet operator*(double s, const Jet& f);

/// Jets of sn, cn, dn at a point, from sn' = cn dn, cn' = -sn dn,
/// dn' = -m sn cn.
Jet sn_jet(const elliptic::EllipticPoint& p, double m);
Jet cn_jet(const elliptic::EllipticPoint& p, double m);
Jet dn_jet(const elliptic::EllipticPoint& p, double m);

/// Jet of the sector prefactor (1, sn, cos(am/2) or sin(am/2)).
Jet prefactor_jet(SectorTag tag, const elliptic::EllipticPoint& p, double m);

/// Jet of the k-th basis function prefactor * cn^k.
Jet basis_jet(SectorTag tag, int k, const elliptic::EllipticPoint& p, double m);

/// u(x) = prefactor(x) * sum_k coeffs[k] cn^k.
double sector_value(SectorTag tag, std::span<const double> coeffs, const elliptic::EllipticPoint& p);

}  // namespace qesband
