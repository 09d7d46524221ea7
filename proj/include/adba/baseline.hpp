#pragma once

#include <cstdint>

#include "adba/prober.hpp"
#include "adba/search.hpp"

namespace adba {

struct ExactBoundary {
  double upper = 1.0;  // smallest strength observed (or given) adversarial
  std::uint64_t queries = 0;
};

/// Bisection on [0, r_hi] until the bracket is at most precision wide.
/// d must be adversarial at r_hi; that is trusted, not re-queried. Costs
/// exactly exact_boundary_cost(r_hi, precision) queries.
ExactBoundary exact_boundary(Prober& prober, const SignDirection& d, double r_hi,
                             double precision);

/// Number of halvings of r_hi needed to reach width <= precision,
/// i.e. ceil(log2(r_hi / precision)).
std::uint64_t exact_boundary_cost(double r_hi, double precision);

inline constexpr double kExactPrecision = 0.001;

/// Block-flip search where each candidate is screened at r_best with one query
/// and, if adversarial, located to within precision by bisection; the smaller
/// boundary wins.
AttackReport attack_exact(Oracle& oracle, const ImageVector& x, Label y,
                          const AttackConfig& config, double precision = kExactPrecision);

}  // namespace adba
