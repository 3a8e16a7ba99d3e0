#include "qesband/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qesband {

double multiset_deviation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<double> sa(a.begin(), a.end());
  std::sort(sa.begin(), sa.end());
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (double x : sa) {
    std::size_t best = b.size();
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(b[j] - x) < dist) {
        dist = std::abs(b[j] - x);
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, dist);
  }
  return worst;
}

double membership_distance(std::span<const double> values, std::span<const double> spectrum) {
  double worst = 0.0;
  for (double x : values) {
    double dist = std::numeric_limits<double>::infinity();
    for (double y : spectrum) dist = std::min(dist, std::abs(x - y));
    worst = std::max(worst, dist);
  }
  return worst;
}

double symmetry_defect(std::span<const double> values) {
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(s[i] + s[s.size() - 1 - i]));
  return worst;
}

}  // namespace qesband
