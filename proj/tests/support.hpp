#pragma once

#include <random>
#include <vector>

#include "qesband/qes_core.hpp"

namespace qesband::test {

inline std::vector<double> energies(const std::vector<BandEdgeSolution>& levels) {
  std::vector<double> e;
  for (const auto& s : levels) e.push_back(s.E);
  return e;
}

inline std::vector<double> energies(const std::vector<ClosedFormLevel>& levels) {
  std::vector<double> e;
  for (const auto& l : levels) e.push_back(l.E);
  return e;
}

// Fixed seed: failures must reproduce.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline constexpr int kTwiceAClosed[] = {0, 1, 2, 3, 4};
inline constexpr double kMGrid[] = {0.1, 0.3, 0.5, 0.7, 0.9};
inline constexpr double kBGrid[] = {0.5, 1.0, 2.0};

}  // namespace qesband::test
