#pragma once

// Algebraic band edges of the elliptic potential.
//
// After the gauge and dn^-a substitutions the band-edge problem becomes
//
//   H u = E u,   H u = -( u'' + [2am sn cn/dn - b sn/dn] u'
//                         + [am + ab cn + m a(a-1) sn^2] u ),
//
// and H leaves each sector (see sector.hpp) invariant when a is an integer
// or half-integer. Restricted to a sector, H is a small matrix whose
// eigenvalues are 2a+1 exact band edges.

#include <vector>

#include "qesband/linalg.hpp"
#include "qesband/potentials.hpp"
#include "qesband/sector.hpp"

namespace qesband {

/// H restricted to one sector: H phi_k = sum_j entries(j, k) phi_j.
struct SectorMatrix {
  Sector sector;
  linalg::Matrix entries;
  double closure_residual = 0.0;  // worst relative held-out residual
  double condition = 0.0;         // condition estimate of the collocation fit
};

struct BandEdgeSolution {
  double E = 0.0;
  Sector sector;
  std::vector<double> coeffs;  // in powers of cn; highest significant one is 1
  int nodes_4K = 0;
  Periodicity periodicity = Periodicity::P4K;
  double imag_part = 0.0;  // discarded imaginary part of the sector eigenvalue
};

/// Defaults for the collocation self-checks.
inline constexpr double kClosureTolerance = 1e-8;
inline constexpr double kConditionLimit = 1e12;
inline constexpr double kRealityTolerance = 1e-8;
inline constexpr double kDegenerateTolerance = 1e-10;

/// Integer a = n: [IntegerEven(n+1), IntegerOdd(n)] (no odd sector when
/// n = 0). Half-integer a = n + 1/2: [HalfPlus(n+1), HalfMinus(n+1)].
std::vector<Sector> enumerate_sectors(const PotentialParams& p);

/// Collocation realization of H on a sector. Points are placed where cn
/// takes Chebyshev values on (0, 2K); 2*dim points are fitted by least
/// squares and 2*dim further points validate closure.
///
/// Throws DomainError for m outside [0, 1) or a sector of the wrong
/// integrality for a, ConsistencyError if H does not close on the span
/// (wrong basis), ConditioningError if the fit is too ill-conditioned.
SectorMatrix build_sector_matrix(const PotentialParams& p, const Sector& s);

/// Eigenpairs of one sector matrix, sorted by energy.
std::vector<BandEdgeSolution> solve_sector(const PotentialParams& p, const SectorMatrix& sm);

/// All 2a+1 algebraic band edges, sorted by energy.
std::vector<BandEdgeSolution> solve_band_edges(const PotentialParams& p);

/// H acting on monomials t^k = cn^k, k = 0..n (integer a = n), exact:
///   t^{k+2}: m(a-k)(a-k-1)   t^{k+1}: b(k-a)   t^k: (1-2m)k^2 + 2mak - ma^2
///   t^{k-1}: -bk             t^{k-2}: -(1-m)k(k-1)
linalg::Matrix monomial_action_matrix(const PotentialParams& p);

/// Closed-form energies for a in {0, 1/2, 1, 3/2, 2}, valid for m in [0, 1]
/// (the formulas stay finite at m = 1). Sorted ascending, each tagged with
/// its sector. DomainError for other a.
struct ClosedFormLevel {
  double E;
  SectorTag tag;
};
std::vector<ClosedFormLevel> closed_form_energies(int twice_a, double b, double m);

/// Closed-form energies with eigenvectors recovered from the sector
/// systems. Requires m < 1.
std::vector<BandEdgeSolution> closed_form_edges(const PotentialParams& p);

/// Real roots of x^3 + c2 x^2 + c1 x + c0 via the companion matrix,
/// ascending. ConsistencyError if a root is complex beyond 1e-8.
std::vector<double> cubic_roots(double c2, double c1, double c0);

/// The sl(2) generators on the monomial basis t^0..t^n:
///   J+ = t^2 d/dt - n t,  J0 = t d/dt - n/2,  J- = d/dt.
struct Sl2Triple {
  int n = 0;
  linalg::Matrix plus;
  linalg::Matrix zero;
  linalg::Matrix minus;
};
Sl2Triple sl2_triple(int n);

/// E-independent part of
///   m J+J+ + (1-2m) J0J0 - (1-m) J-J- + n J0 + b (J+ - J-)
/// minus (m n^2/2 - n^2/4), which should reproduce monomial_action_matrix.
linalg::Matrix sl2_combination(const PotentialParams& p);

/// max |sl2_combination - monomial_action_matrix|. Integer a only.
double sl2_verify(const PotentialParams& p);

struct NodeReport {
  int nodes = 0;
  std::vector<double> zeros;       // bisection-refined sign changes
  std::vector<double> tangential;  // near-zeros without a sign change
};

/// Sign changes of u over one window of length 4K, 4096-point grid with
/// bisection refinement. The window is offset by a fraction of a grid step
/// so that zeros on symmetry points (x = 0, 2K, ...) fall strictly between
/// samples; the count over any full window is the same.
NodeReport node_report(const BandEdgeSolution& s, const PotentialParams& p);
int count_nodes(const BandEdgeSolution& s, const PotentialParams& p);

/// Layers for assembling psi from a solution.
WavefunctionLayers layers_for(const BandEdgeSolution& s, const PotentialParams& p, double shift = 0.0);

}  // namespace qesband
