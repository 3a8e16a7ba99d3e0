#include "qesband/sector.hpp"

namespace qesband {

std::string_view to_string(SectorTag tag) {
  switch (tag) {
    case SectorTag::IntegerEven: return "IntegerEven";
    case SectorTag::IntegerOdd: return "IntegerOdd";
    case SectorTag::HalfPlus: return "HalfPlus";
    case SectorTag::HalfMinus: return "HalfMinus";
  }
  return "?";
}

std::string_view to_string(Periodicity p) { return p == Periodicity::P4K ? "4K" : "8K"; }

bool is_half_integer_sector(SectorTag tag) { return tag == SectorTag::HalfPlus || tag == SectorTag::HalfMinus; }

Periodicity periodicity_of(SectorTag tag) { return is_half_integer_sector(tag) ? Periodicity::A4K : Periodicity::P4K; }

Jet operator*(const Jet& f, const Jet& g) {
  return {f.value * g.value, f.d1 * g.value + f.value * g.d1, f.d2 * g.value + 2.0 * f.d1 * g.d1 + f.value * g.d2};
}

Jet operator+(const Jet& f, const Jet& g) { return {f.value + g.value, f.d1 + g.d1, f.d2 + g.d2}; }

Jet operator*(double s, const Jet& f) { return {s * f.value, s * f.d1, s * f.d2}; }

Jet sn_jet(const elliptic::EllipticPoint& p, double m) {
  const double s = p.sn, c = p.cn, d = p.dn;
  return {s, c * d, -s * d * d - m * s * c * c};
}

Jet cn_jet(const elliptic::EllipticPoint& p, double m) {
  const double s = p.sn, c = p.cn, d = p.dn;
  return {c, -s * d, -c * d * d + m * s * s * c};
}

Jet dn_jet(const elliptic::EllipticPoint& p, double m) {
  const double s = p.sn, c = p.cn, d = p.dn;
  return {d, -m * s * c, -m * d * (c * c - s * s)};
}

Jet prefactor_jet(SectorTag tag, const elliptic::EllipticPoint& p, double m) {
  switch (tag) {
    case SectorTag::IntegerEven: return {1.0, 0.0, 0.0};
    case SectorTag::IntegerOdd: return sn_jet(p, m);
    case SectorTag::HalfPlus:
    case SectorTag::HalfMinus: {
      // am' = dn
      const auto h = elliptic::half_angle_factors(p);
      const double s = p.sn, c = p.cn, d = p.dn;
      if (tag == SectorTag::HalfPlus)
        return {h.cos_half, -0.5 * h.sin_half * d, -0.25 * h.cos_half * d * d + 0.5 * m * h.sin_half * s * c};
      return {h.sin_half, 0.5 * h.cos_half * d, -0.25 * h.sin_half * d * d - 0.5 * m * h.cos_half * s * c};
    }
  }
  return {};
}

Jet basis_jet(SectorTag tag, int k, const elliptic::EllipticPoint& p, double m) {
  const Jet cn = cn_jet(p, m);
  Jet power{1.0, 0.0, 0.0};
  for (int i = 0; i < k; ++i) power = power * cn;
  return prefactor_jet(tag, p, m) * power;
}

double sector_value(SectorTag tag, std::span<const double> coeffs, const elliptic::EllipticPoint& p) {
  double poly = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) poly = poly * p.cn + coeffs[k];
  double pref = 1.0;
  switch (tag) {
    case SectorTag::IntegerEven: break;
    case SectorTag::IntegerOdd: pref = p.sn; break;
    case SectorTag::HalfPlus: pref = elliptic::half_angle_factors(p).cos_half; break;
    case SectorTag::HalfMinus: pref = elliptic::half_angle_factors(p).sin_half; break;
  }
  return pref * poly;
}

}  // namespace qesband
