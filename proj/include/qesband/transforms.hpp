#pragma once

// Maps between the elliptic potential and the companion potential
//   [beta^2/4 - m a(a+1)] cn^2 + beta (a + 1/2) sn dn,
// and the m -> 0 / m -> 1 limits of the algebraic band edges.
//
// Translating the elliptic potential by -K gives the companion potential
// with beta = -b / sqrt(1 - m):
//   sn(x - K) = -cn/dn,  cn(x - K) = sqrt(1-m) sn/dn,  dn(x - K) = sqrt(1-m)/dn.
// The spectra coincide and companion eigenfunctions are psi(x - K).

#include <vector>

#include "qesband/potentials.hpp"
#include "qesband/qes_core.hpp"

namespace qesband {

/// beta = -b / sqrt(1 - m). DomainError at m = 1.
CompanionParams to_companion(const PotentialParams& p);

/// b = -sqrt(1 - m) beta.
PotentialParams from_companion(const CompanionParams& c);

/// Band edges of the companion potential: energies are those of the
/// mapped elliptic problem; eigenfunctions via companion_layers.
std::vector<BandEdgeSolution> companion_edges(const CompanionParams& c);

/// Layers evaluating the elliptic eigenfunction at x - K.
WavefunctionLayers companion_layers(const CompanionParams& c, const BandEdgeSolution& s);

enum class Limit { DsgM0, DshgM1, HyperbolicM1 };

/// Band-edge energies in a limit, ascending.
///   DsgM0:        closed forms at m = 0 with the given b.
///   DshgM1:       closed forms at m = 1 with the given b.
///   HyperbolicM1: b = -sqrt(1-m) beta vanishes at m = 1, so the energies
///                 are the m = 1, b = 0 closed forms for every beta.
/// For a > 2 the sector solver is run at 1 - m = 1e-6 and 4e-6 and
/// extrapolated linearly in 1 - m (m = 0 is evaluated directly).
std::vector<double> limit_edges(int twice_a, double b_or_beta, Limit which);

}  // namespace qesband
