#include "qesband/transforms.hpp"

#include <cmath>

#include "qesband/errors.hpp"

namespace qesband {

namespace {

std::vector<double> energies_of(const std::vector<BandEdgeSolution>& s) {
  std::vector<double> e;
  e.reserve(s.size());
  for (const auto& x : s) e.push_back(x.E);
  return e;
}

std::vector<double> closed_energies(int twice_a, double b, double m) {
  std::vector<double> e;
  for (const auto& l : closed_form_energies(twice_a, b, m)) e.push_back(l.E);
  return e;
}

}  // namespace

CompanionParams to_companion(const PotentialParams& p) {
  if (!(p.m < 1.0)) throw DomainError("companion map requires m < 1");
  return CompanionParams{p.twice_a, -p.b / std::sqrt(1.0 - p.m), p.m};
}

PotentialParams from_companion(const CompanionParams& c) {
  if (!(c.m >= 0.0 && c.m < 1.0)) throw DomainError("companion map requires 0 <= m < 1");
  if (!std::isfinite(c.beta)) throw DomainError("beta must be finite");
  return PotentialParams::make(c.twice_a, -std::sqrt(1.0 - c.m) * c.beta, c.m);
}

std::vector<BandEdgeSolution> companion_edges(const CompanionParams& c) {
  return solve_band_edges(from_companion(c));
}

WavefunctionLayers companion_layers(const CompanionParams& c, const BandEdgeSolution& s) {
  const PotentialParams p = from_companion(c);
  return layers_for(s, p, -p.K);
}

std::vector<double> limit_edges(int twice_a, double b_or_beta, Limit which) {
  if (twice_a < 0) throw DomainError("a must be non-negative");
  const bool closed = twice_a <= 4;
  if (which == Limit::DsgM0) {
    if (closed) return closed_energies(twice_a, b_or_beta, 0.0);
    return energies_of(solve_band_edges(PotentialParams::make(twice_a, b_or_beta, 0.0)));
  }
  const double b_at_limit = which == Limit::DshgM1 ? b_or_beta : 0.0;
  if (closed) return closed_energies(twice_a, b_at_limit, 1.0);

  // The energies are analytic in m, so extrapolate linearly in 1 - m from
  // 1 - m = 1e-6 and 4e-6. Along the hyperbolic path b = -sqrt(1-m) beta is
  // already zero at the limit; b = 0 is used so no beta residue survives.
  auto at = [&](double one_minus_m) {
    const double b = which == Limit::DshgM1 ? b_or_beta : 0.0;
    return energies_of(solve_band_edges(PotentialParams::make(twice_a, b, 1.0 - one_minus_m)));
  };
  const auto e1 = at(1e-6);
  const auto e2 = at(4e-6);
  std::vector<double> out(e1.size());
  for (std::size_t i = 0; i < e1.size(); ++i) out[i] = (4.0 * e1[i] - e2[i]) / 3.0;
  return out;
}

}  // namespace qesband
