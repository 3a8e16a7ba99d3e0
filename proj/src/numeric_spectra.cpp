#include "qesband/numeric_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qesband/errors.hpp"
#include "qesband/linalg.hpp"
#include "qesband/potentials.hpp"

namespace qesband {

namespace {

constexpr int kQuadratureOversampling = 8;
constexpr double kPeriodicityTolerance = 1e-9;
constexpr double kBoundThreshold = -1e-6;
constexpr double kRichardsonTolerance = 1e-5;
constexpr double kLeakTolerance = 1e-8;

void check_periodic(const FloquetSpec& spec) {
  for (int i = 0; i < 16; ++i) {
    const double x = (0.0617 + i / 16.0) * spec.period;
    const double v0 = spec.potential(x);
    const double v1 = spec.potential(x + spec.period);
    if (!(std::abs(v1 - v0) <= kPeriodicityTolerance * std::max(1.0, std::abs(v0))))
      throw DomainError("potential is not periodic with the requested period");
  }
}

struct LineProblem {
  std::vector<double> diag;
  std::vector<double> off;
  double h = 0.0;
};

LineProblem discretize_line(double a, double beta, double half_width, int n_grid) {
  LineProblem lp;
  lp.h = 2.0 * half_width / (n_grid - 1);
  const int interior = n_grid - 2;
  const double inv_h2 = 1.0 / (lp.h * lp.h);
  lp.diag.resize(static_cast<std::size_t>(interior));
  lp.off.assign(static_cast<std::size_t>(interior - 1), -inv_h2);
  for (int i = 0; i < interior; ++i) {
    const double x = -half_width + (i + 1) * lp.h;
    lp.diag[static_cast<std::size_t>(i)] = 2.0 * inv_h2 + v_hyperbolic(x, a, beta);
  }
  return lp;
}

}  // namespace

NumericSpectrum floquet_edges(const FloquetSpec& spec, int count) {
  if (!(spec.period > 0.0) || !std::isfinite(spec.period)) throw DomainError("Floquet period must be positive");
  if (spec.n_basis < 16 || spec.n_basis % 2 != 0) throw DomainError("n_basis must be even and >= 16");
  if (!spec.potential) throw DomainError("Floquet potential missing");
  if (spec.bc == Boundary::Dirichlet) throw DomainError("Floquet solver takes Periodic or Antiperiodic only");
  check_periodic(spec);

  const double L = spec.period;
  const int half = spec.n_basis / 2;
  const bool anti = spec.bc == Boundary::Antiperiodic;
  const double offset = anti ? 0.5 : 0.0;

  // Real orthonormal basis: (wavenumber, is_sine)
  struct Mode {
    double k;
    bool sine;
  };
  std::vector<Mode> modes;
  if (!anti) {
    modes.push_back({0.0, false});
    for (int j = 1; j <= half; ++j) {
      const double k = 2.0 * std::numbers::pi * j / L;
      modes.push_back({k, false});
      modes.push_back({k, true});
    }
  } else {
    for (int j = 0; j < half; ++j) {
      const double k = 2.0 * std::numbers::pi * (j + offset) / L;
      modes.push_back({k, false});
      modes.push_back({k, true});
    }
  }
  const std::size_t n = modes.size();
  if (count < 0 || static_cast<std::size_t>(count) > n) throw DomainError("requested more eigenvalues than basis functions");

  const std::size_t nq = static_cast<std::size_t>(kQuadratureOversampling * spec.n_basis);
  const double dx = L / static_cast<double>(nq);
  std::vector<double> v(nq);
  for (std::size_t q = 0; q < nq; ++q) v[q] = spec.potential(static_cast<double>(q) * dx);

  linalg::Matrix table(n, nq);
  for (std::size_t i = 0; i < n; ++i) {
    const double norm = modes[i].k == 0.0 ? std::sqrt(1.0 / L) : std::sqrt(2.0 / L);
    for (std::size_t q = 0; q < nq; ++q) {
      const double arg = modes[i].k * static_cast<double>(q) * dx;
      table(i, q) = norm * (modes[i].sine ? std::sin(arg) : std::cos(arg));
    }
  }

  linalg::Matrix h(n, n);
  std::vector<double> weighted(nq);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t q = 0; q < nq; ++q) weighted[q] = table(i, q) * v[q] * dx;
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t q = 0; q < nq; ++q) s += weighted[q] * table(j, q);
      h(i, j) = h(j, i) = s;
    }
    h(i, i) += modes[i].k * modes[i].k;
  }

  auto ev = linalg::eigenvalues_symmetric(std::move(h));
  ev.resize(static_cast<std::size_t>(count));
  return NumericSpectrum{std::move(ev), spec.bc, spec.n_basis, 0.0};
}

NumericSpectrum bound_states_line(int twice_a, double beta, double half_width, int n_grid) {
  if (twice_a < 0) throw DomainError("a must be non-negative");
  if (!(half_width >= 20.0)) throw DomainError("half_width must be at least 20");
  if (n_grid < 2001 || n_grid % 2 == 0) throw DomainError("n_grid must be odd and at least 2001");
  const double a = 0.5 * twice_a;

  std::vector<std::vector<double>> levels;
  double finest_h = 0.0;
  for (int refine = 0; refine < 3; ++refine) {
    const int points = (n_grid - 1) * (1 << refine) + 1;
    const LineProblem lp = discretize_line(a, beta, half_width, points);
    levels.push_back(linalg::tridiagonal_eigenvalues_below(lp.diag, lp.off, kBoundThreshold));
    finest_h = lp.h;

    if (refine == 0 && !levels.front().empty()) {
      // Ground state must be well inside the box.
      const auto psi = linalg::tridiagonal_eigenvector(lp.diag, lp.off, levels.front().front());
      const std::size_t edge = psi.size() / 10;
      double outer = 0.0, total = 0.0;
      for (std::size_t i = 0; i < psi.size(); ++i) {
        const double w = psi[i] * psi[i];
        total += w;
        if (i < edge || i >= psi.size() - edge) outer += w;
      }
      if (outer > kLeakTolerance * total) throw DomainError("bound_states_line: box too small for the ground state");
    }
  }

  // The finest grids may resolve a level the coarse grid missed near
  // threshold; keep only levels present on all grids.
  std::size_t count = std::min({levels[0].size(), levels[1].size(), levels[2].size()});
  std::vector<double> coarse(count), fine(count);
  for (std::size_t i = 0; i < count; ++i) {
    coarse[i] = (4.0 * levels[1][i] - levels[0][i]) / 3.0;
    fine[i] = (4.0 * levels[2][i] - levels[1][i]) / 3.0;
    if (!(std::abs(fine[i] - coarse[i]) < kRichardsonTolerance))
      throw ConsistencyError("bound_states_line: refinement changed level " + std::to_string(i) + " by " +
                             std::to_string(std::abs(fine[i] - coarse[i])));
  }
  return NumericSpectrum{std::move(fine), Boundary::Dirichlet, 0, finest_h};
}

}  // namespace qesband
