#include "qesband/qes_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>

#include "qesband/errors.hpp"

namespace qesband {

namespace {

constexpr int kMaxSectorDim = 64;
constexpr int kNodeGrid = 4096;

void require_band_modulus(const PotentialParams& p) {
  if (!(p.m >= 0.0 && p.m < 1.0)) throw DomainError("band-edge solver requires 0 <= m < 1");
}

void require_matching_sector(const PotentialParams& p, const Sector& s) {
  if (s.dim < 1 || s.dim > kMaxSectorDim) throw DomainError("sector dimension must lie in [1, 64]");
  if (p.integer_a() == is_half_integer_sector(s.tag))
    throw DomainError(std::string("sector ") + std::string(to_string(s.tag)) + " does not match a = " +
                      std::to_string(p.a()));
}

// x in [0, 2K] with cn(x) = t; cn decreases monotonically there.
double x_for_cn(double t, const PotentialParams& p) {
  double lo = 0.0;
  double hi = 2.0 * p.K;
  for (int it = 0; it < 200 && hi - lo > 1e-16 * p.K; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (elliptic::jacobi_point(mid, p.m).cn > t)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// (H phi)(x) from the jet of phi.
double apply_h(const Jet& phi, const elliptic::EllipticPoint& e, const PotentialParams& p) {
  const double a = p.a();
  const double m = p.m;
  const double drift = 2.0 * a * m * e.sn * e.cn / e.dn - p.b * e.sn / e.dn;
  const double pot = a * m + a * p.b * e.cn + m * a * (a - 1.0) * e.sn * e.sn;
  return -(phi.d2 + drift * phi.d1 + pot * phi.value);
}

struct CollocationSamples {
  linalg::Matrix basis;   // rows: points, cols: basis index
  linalg::Matrix images;  // H applied to each basis function
};

CollocationSamples sample(const PotentialParams& p, const Sector& s, const std::vector<double>& cn_targets) {
  CollocationSamples out{linalg::Matrix(cn_targets.size(), static_cast<std::size_t>(s.dim)),
                         linalg::Matrix(cn_targets.size(), static_cast<std::size_t>(s.dim))};
  for (std::size_t j = 0; j < cn_targets.size(); ++j) {
    const auto e = elliptic::jacobi_point(x_for_cn(cn_targets[j], p), p.m);
    for (int k = 0; k < s.dim; ++k) {
      const Jet phi = basis_jet(s.tag, k, e, p.m);
      out.basis(j, static_cast<std::size_t>(k)) = phi.value;
      out.images(j, static_cast<std::size_t>(k)) = apply_h(phi, e, p);
    }
  }
  return out;
}

void normalize_leading(std::vector<double>& c) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return;
  for (std::size_t k = c.size(); k-- > 0;) {
    if (std::abs(c[k]) > 1e-10 * scale) {
      const double lead = c[k];
      for (double& v : c) v /= lead;
      return;
    }
  }
}

std::vector<BandEdgeSolution> solutions_from(const PotentialParams& p, const SectorMatrix& sm,
                                             const std::vector<double>& energies, const std::vector<double>& imag) {
  const auto vectors = linalg::eigenvectors_real(sm.entries, energies, kDegenerateTolerance);
  std::vector<BandEdgeSolution> out;
  out.reserve(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) {
    BandEdgeSolution s;
    s.E = energies[i];
    s.sector = sm.sector;
    s.coeffs = vectors[i];
    normalize_leading(s.coeffs);
    s.periodicity = periodicity_of(sm.sector.tag);
    s.imag_part = imag.empty() ? 0.0 : imag[i];
    s.nodes_4K = count_nodes(s, p);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<Sector> enumerate_sectors(const PotentialParams& p) {
  if (p.twice_a < 0) throw DomainError("a must be non-negative");
  const int n = p.twice_a / 2;
  if (p.integer_a()) {
    std::vector<Sector> out{{SectorTag::IntegerEven, n + 1}};
    if (n > 0) out.push_back({SectorTag::IntegerOdd, n});
    return out;
  }
  return {{SectorTag::HalfPlus, n + 1}, {SectorTag::HalfMinus, n + 1}};
}

SectorMatrix build_sector_matrix(const PotentialParams& p, const Sector& s) {
  require_band_modulus(p);
  require_matching_sector(p, s);

  const int dim = s.dim;
  const int fit_points = 2 * dim;
  const int check_points = 2 * dim;
  std::vector<double> fit_cn(static_cast<std::size_t>(fit_points));
  for (int j = 0; j < fit_points; ++j)
    fit_cn[static_cast<std::size_t>(j)] = std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * fit_points));
  // interior extrema of T_{2 dim + 1}: interleave with the fit nodes
  std::vector<double> check_cn(static_cast<std::size_t>(check_points));
  for (int j = 0; j < check_points; ++j)
    check_cn[static_cast<std::size_t>(j)] = std::cos((j + 1.0) * std::numbers::pi / (check_points + 1.0));

  const CollocationSamples fit = sample(p, s, fit_cn);
  const linalg::LeastSquares ls(fit.basis);
  const double cond = ls.condition_estimate();
  if (!(cond <= kConditionLimit))
    throw ConditioningError("sector collocation fit ill-conditioned (condition " + std::to_string(cond) + ")");

  SectorMatrix sm{s, linalg::Matrix(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)), 0.0, cond};
  for (int k = 0; k < dim; ++k) {
    const auto coeffs = ls.solve(fit.images.column(static_cast<std::size_t>(k)));
    for (int j = 0; j < dim; ++j) sm.entries(static_cast<std::size_t>(j), static_cast<std::size_t>(k)) = coeffs[static_cast<std::size_t>(j)];
  }

  const CollocationSamples held = sample(p, s, check_cn);
  // Relative to |H phi_k|, floored by the size of H's coefficients times
  // |phi_k| so that H phi_k = 0 (e.g. sn at m = 1/2, a = 1) is not noise/noise.
  const double a = p.a();
  const double op_scale = 1.0 + a * (a + 1.0) + std::abs(p.b) * (a + 1.0);
  double worst = 0.0;
  for (int k = 0; k < dim; ++k) {
    double scale = 0.0;
    double basis_scale = 0.0;
    double resid = 0.0;
    for (int j = 0; j < check_points; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      const double target = held.images(jj, static_cast<std::size_t>(k));
      double fitted = 0.0;
      for (int i = 0; i < dim; ++i)
        fitted += sm.entries(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) * held.basis(jj, static_cast<std::size_t>(i));
      scale = std::max(scale, std::abs(target));
      basis_scale = std::max(basis_scale, std::abs(held.basis(jj, static_cast<std::size_t>(k))));
      resid = std::max(resid, std::abs(target - fitted));
    }
    scale = std::max(scale, 1e-6 * op_scale * basis_scale);
    worst = std::max(worst, scale > 0.0 ? resid / scale : resid);
  }
  sm.closure_residual = worst;
  if (!(worst < kClosureTolerance))
    throw ConsistencyError("sector " + std::string(to_string(s.tag)) + " not closed under H (held-out residual " +
                           std::to_string(worst) + ")");
  return sm;
}

std::vector<BandEdgeSolution> solve_sector(const PotentialParams& p, const SectorMatrix& sm) {
  const auto eig = linalg::eigenvalues_general(sm.entries);
  std::vector<double> energies;
  std::vector<double> imag;
  energies.reserve(eig.size());
  for (const auto& z : eig) {
    if (std::abs(z.imag()) >= kRealityTolerance)
      throw ConsistencyError("complex sector eigenvalue (imaginary part " + std::to_string(z.imag()) + ")");
    energies.push_back(z.real());
    imag.push_back(std::abs(z.imag()));
  }
  return solutions_from(p, sm, energies, imag);
}

std::vector<BandEdgeSolution> solve_band_edges(const PotentialParams& p) {
  require_band_modulus(p);
  std::vector<BandEdgeSolution> all;
  for (const Sector& s : enumerate_sectors(p)) {
    auto part = solve_sector(p, build_sector_matrix(p, s));
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.E < y.E; });
  if (static_cast<int>(all.size()) != p.level_count())
    throw ConsistencyError("expected 2a+1 band edges, found " + std::to_string(all.size()));
  return all;
}

linalg::Matrix monomial_action_matrix(const PotentialParams& p) {
  if (!p.integer_a()) throw DomainError("monomial action matrix needs integer a");
  const int n = p.twice_a / 2;
  const double a = n;
  const double m = p.m;
  const double b = p.b;
  linalg::Matrix h(static_cast<std::size_t>(n + 1), static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double kd = k;
    if (k + 2 <= n) h(kk + 2, kk) = m * (a - kd) * (a - kd - 1.0);
    if (k + 1 <= n) h(kk + 1, kk) = b * (kd - a);
    h(kk, kk) = (1.0 - 2.0 * m) * kd * kd + 2.0 * m * a * kd - m * a * a;
    if (k >= 1) h(kk - 1, kk) = -b * kd;
    if (k >= 2) h(kk - 2, kk) = -(1.0 - m) * kd * (kd - 1.0);
  }
  return h;
}

std::vector<double> cubic_roots(double c2, double c1, double c0) {
  linalg::Matrix companion(3, 3);
  companion(0, 0) = -c2;
  companion(0, 1) = -c1;
  companion(0, 2) = -c0;
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  std::vector<double> roots;
  for (const auto& z : linalg::eigenvalues_general(companion)) {
    if (std::abs(z.imag()) >= kRealityTolerance) throw ConsistencyError("cubic has complex roots");
    roots.push_back(z.real());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<ClosedFormLevel> closed_form_energies(int twice_a, double b, double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw DomainError("m must lie in [0, 1]");
  std::vector<ClosedFormLevel> out;
  const double w = 1.0 - 2.0 * m;
  switch (twice_a) {
    case 0:
      out = {{0.0, SectorTag::IntegerEven}};
      break;
    case 1:
      // u = sqrt(1 + cn) and sqrt(1 - cn)
      out = {{(w - 2.0 * b) / 4.0, SectorTag::HalfPlus}, {(w + 2.0 * b) / 4.0, SectorTag::HalfMinus}};
      break;
    case 2: {
      const double r = std::sqrt(1.0 + 4.0 * b * b);
      out = {{w, SectorTag::IntegerOdd}, {(w - r) / 2.0, SectorTag::IntegerEven}, {(w + r) / 2.0, SectorTag::IntegerEven}};
      break;
    }
    case 3: {
      const double q = 1.0 - m * (1.0 - m);
      const double rp = std::sqrt(q + w * b + b * b);
      const double rm = std::sqrt(q - w * b + b * b);
      const double cp = (5.0 - 10.0 * m - 2.0 * b) / 4.0;
      const double cm = (5.0 - 10.0 * m + 2.0 * b) / 4.0;
      out = {{cp - rp, SectorTag::HalfPlus},
             {cp + rp, SectorTag::HalfPlus},
             {cm - rm, SectorTag::HalfMinus},
             {cm + rm, SectorTag::HalfMinus}};
      break;
    }
    case 4: {
      // sn (alpha + beta cn): the radical enters halved.
      const double r = std::sqrt(9.0 + 4.0 * b * b);
      out = {{(5.0 * w - r) / 2.0, SectorTag::IntegerOdd}, {(5.0 * w + r) / 2.0, SectorTag::IntegerOdd}};
      // alpha + beta cn + delta cn^2: E = x + 1 - 2m with
      // x^3 + 2(2m-1) x^2 - (4b^2 + 3) x + 8(1-2m) b^2 = 0
      for (double x : cubic_roots(2.0 * (2.0 * m - 1.0), -(4.0 * b * b + 3.0), 8.0 * w * b * b))
        out.push_back({x + w, SectorTag::IntegerEven});
      break;
    }
    default:
      throw DomainError("closed forms exist only for a in {0, 1/2, 1, 3/2, 2}");
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.E < y.E; });
  return out;
}

std::vector<BandEdgeSolution> closed_form_edges(const PotentialParams& p) {
  require_band_modulus(p);
  const auto levels = closed_form_energies(p.twice_a, p.b, p.m);
  std::vector<BandEdgeSolution> all;
  for (const Sector& s : enumerate_sectors(p)) {
    std::vector<double> energies;
    for (const auto& l : levels)
      if (l.tag == s.tag) energies.push_back(l.E);
    if (energies.empty()) continue;
    auto part = solutions_from(p, build_sector_matrix(p, s), energies, {});
    all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) { return x.E < y.E; });
  return all;
}

Sl2Triple sl2_triple(int n) {
  if (n < 0) throw DomainError("sl2_triple: n must be non-negative");
  const auto dim = static_cast<std::size_t>(n + 1);
  Sl2Triple t{n, linalg::Matrix(dim, dim), linalg::Matrix(dim, dim), linalg::Matrix(dim, dim)};
  for (int k = 0; k <= n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    if (k + 1 <= n) t.plus(kk + 1, kk) = k - n;
    t.zero(kk, kk) = k - 0.5 * n;
    if (k >= 1) t.minus(kk - 1, kk) = k;
  }
  return t;
}

linalg::Matrix sl2_combination(const PotentialParams& p) {
  if (!p.integer_a()) throw DomainError("sl(2) form applies to integer a");
  const int n = p.twice_a / 2;
  const double m = p.m;
  const auto t = sl2_triple(n);
  const double nd = n;
  linalg::Matrix c = t.plus * t.plus * m + t.zero * t.zero * (1.0 - 2.0 * m) - t.minus * t.minus * (1.0 - m) +
                     t.zero * nd + (t.plus - t.minus) * p.b;
  // lambda = -(E + m n^2/2 - n^2/4)
  const double shift = m * nd * nd / 2.0 - nd * nd / 4.0;
  for (std::size_t i = 0; i < c.rows(); ++i) c(i, i) -= shift;
  return c;
}

double sl2_verify(const PotentialParams& p) {
  return linalg::max_abs_diff(sl2_combination(p), monomial_action_matrix(p));
}

NodeReport node_report(const BandEdgeSolution& s, const PotentialParams& p) {
  require_band_modulus(p);
  const double h = p.period / kNodeGrid;
  const double x0 = (std::numbers::phi - 1.0) * h;
  auto u = [&](double x) { return sector_value(s.sector.tag, s.coeffs, elliptic::jacobi_point(x, p.m)); };

  std::vector<double> vals(kNodeGrid + 1);
  double scale = 0.0;
  for (int i = 0; i <= kNodeGrid; ++i) {
    vals[static_cast<std::size_t>(i)] = u(x0 + i * h);
    scale = std::max(scale, std::abs(vals[static_cast<std::size_t>(i)]));
  }
  NodeReport r;
  if (scale == 0.0) return r;

  int last = -1;  // index of last nonzero sample
  for (int i = 0; i <= kNodeGrid; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    if (v == 0.0) continue;
    if (last >= 0 && (v > 0.0) != (vals[static_cast<std::size_t>(last)] > 0.0)) {
      double lo = x0 + last * h;
      double hi = x0 + i * h;
      const bool lo_positive = vals[static_cast<std::size_t>(last)] > 0.0;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * p.period; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((u(mid) > 0.0) == lo_positive)
          lo = mid;
        else
          hi = mid;
      }
      r.zeros.push_back(0.5 * (lo + hi));
    }
    last = i;
  }
  r.nodes = static_cast<int>(r.zeros.size());

  for (int i = 1; i < kNodeGrid; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    const double prev = vals[static_cast<std::size_t>(i - 1)];
    const double next = vals[static_cast<std::size_t>(i + 1)];
    const bool local_min = std::abs(v) <= std::abs(prev) && std::abs(v) <= std::abs(next);
    if (local_min && std::abs(v) < 1e-9 * scale && prev * next > 0.0 && prev * v >= 0.0)
      r.tangential.push_back(x0 + i * h);
  }
  return r;
}

int count_nodes(const BandEdgeSolution& s, const PotentialParams& p) { return node_report(s, p).nodes; }

WavefunctionLayers layers_for(const BandEdgeSolution& s, const PotentialParams& p, double shift) {
  return WavefunctionLayers{p, s.sector, s.coeffs, shift};
}

}  // namespace qesband
