#pragma once

#include <span>

namespace qesband {

/// Greedy multiset matching: each value of `a` is paired with the nearest
/// unused value of `b`; returns the largest paired distance (+inf if the
/// sizes differ).
double multiset_deviation(std::span<const double> a, std::span<const double> b);

/// max over `values` of the distance to the nearest element of `spectrum`.
double membership_distance(std::span<const double> values, std::span<const double> spectrum);

/// max_i |e_i + e_{n-1-i}| over the sorted values: zero iff the multiset
/// is symmetric about 0.
double symmetry_defect(std::span<const double> values);

}  // namespace qesband
