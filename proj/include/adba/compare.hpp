#pragma once

#include <cstdint>
#include <string_view>

#include "adba/distribution.hpp"
#include "adba/prober.hpp"
#include "adba/sign_direction.hpp"

namespace adba {

enum class ProbeRule {
  kMidpoint,  // ADBA
  kMedian,    // ADBA-md: mass median of rho on the bracket
};

struct CompareConfig {
  double tau = 0.002;
  ProbeRule rule = ProbeRule::kMidpoint;
  /// Shape of rho; r_ref is replaced by the incoming r_best on each call.
  RhoParams rho = RhoParams::reference();
  int max_probe_loops = 64;
};

enum class CompareStatus {
  kKeptBest,
  kWinnerD1,
  kWinnerD2,
  kToleranceExit,
  kBudgetExhausted,
};

std::string_view to_string(CompareStatus status);

struct ComparisonOutcome {
  SignDirection winner;
  double adb = 0.0;
  std::uint64_t queries_used = 0;
  CompareStatus status = CompareStatus::kKeptBest;
  /// Bracket probes issued after the screening probe at r_best.
  int attempts = 0;
  /// (winner, adb) was itself observed adversarial by a query in this call.
  bool observed_adversarial = false;
};

/// Picks the next strength inside (start, end) for the configured rule.
double next_probe(const CompareConfig& config, double r_best, double start, double end);

/// Decides which of d1, d2 has the smaller decision boundary without locating
/// either boundary, using a shrinking strength bracket under r_best.
///
/// Requires (d_best, r_best) adversarial and r_best in (0, 1]. Repeated probes
/// at the same strength within one call are answered from a local memo, so
/// queries_used counts distinct model evaluations.
ComparisonOutcome compare_directions(Prober& prober, const SignDirection& d_best, double r_best,
                                     const SignDirection& d1, const SignDirection& d2,
                                     const CompareConfig& config);

/// compare_directions followed by a second bracket search that pits any new
/// winner against d_best on [0, adb].
ComparisonOutcome ccm_compare(Prober& prober, const SignDirection& d_best, double r_best,
                              const SignDirection& d1, const SignDirection& d2,
                              const CompareConfig& config);

}  // namespace adba
