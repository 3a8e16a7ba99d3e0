#pragma once

// Solvers that know nothing about the algebraic structure: plane-wave
// diagonalization for band edges of a periodic potential and finite
// differences for bound states on the line. They serve as independent
// references for the sector energies.

#include <functional>
#include <vector>

namespace qesband {

enum class Boundary { Periodic, Antiperiodic, Dirichlet };

/// Periodic:     psi(x + L) = psi(x), wavenumbers 2 pi j / L
/// Antiperiodic: psi(x + L) = -psi(x), wavenumbers 2 pi (j + 1/2) / L
///
/// n_basis counts plane waves e^{ikx}: the real basis has n_basis + 1
/// functions (1, cos, sin up to j = n_basis/2) for Periodic and n_basis
/// functions (cos, sin for j < n_basis/2) for Antiperiodic.
struct FloquetSpec {
  double period = 0.0;
  Boundary bc = Boundary::Periodic;
  int n_basis = 128;
  std::function<double(double)> potential;
};

struct NumericSpectrum {
  std::vector<double> eigenvalues;  // ascending
  Boundary bc = Boundary::Periodic;
  int n_basis = 0;          // plane-wave solver
  double grid_step = 0.0;   // finite-difference solver (finest grid used)
};

/// Lowest `count` eigenvalues of -d^2/dx^2 + V under the requested
/// boundary condition. Matrix elements by the trapezoid rule on
/// 8 * n_basis samples. DomainError if V is not L-periodic to 1e-9, if
/// n_basis < 16 or odd, or if count exceeds the basis size.
NumericSpectrum floquet_edges(const FloquetSpec& spec, int count);

inline constexpr double kLineHalfWidth = 25.0;
inline constexpr int kLineGrid = 4001;

/// Bound states (E < -1e-6) of the hyperbolic potential
///   [beta^2/4 - a(a+1)] sech^2 x - beta(a + 1/2) sech x tanh x
/// on [-W, W] with Dirichlet ends, 3-point finite differences.
///
/// The grid is refined twice (n, 2n-1, 4n-3 points) and each refinement
/// pair is Richardson-extrapolated in h^2; the two extrapolants must agree
/// to 1e-5 (ConsistencyError otherwise) and the finer one is returned.
/// DomainError if W < 20, n_grid < 2001 or even, or if the ground state
/// leaks more than 1e-8 of its norm into the outer tenth of the box.
NumericSpectrum bound_states_line(int twice_a, double beta, double half_width = kLineHalfWidth,
                                  int n_grid = kLineGrid);

}  // namespace qesband
