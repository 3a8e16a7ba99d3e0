#pragma once

#include <stdexcept>
#include <string>

namespace qesband {

/// Input outside an operation's mathematical domain (m = 1 where K(m) is
/// needed, invalid a, non-periodic potential, box too small, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A self-check inside a solver failed: sector closure, spectral reality,
/// eigensolver non-convergence.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least-squares fit too ill-conditioned to trust.
class ConditioningError : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qesband
