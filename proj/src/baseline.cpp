#include "adba/baseline.hpp"

#include <stdexcept>

namespace adba {

std::uint64_t exact_boundary_cost(double r_hi, double precision) {
  if (!(precision > 0.0)) throw std::invalid_argument("precision must be positive");
  if (!(r_hi > 0.0 && r_hi <= 1.0)) throw std::invalid_argument("r_hi must lie in (0, 1]");
  std::uint64_t steps = 0;
  // Halving is exact in binary floating point, so this is ceil(log2(r_hi / precision)).
  for (double width = r_hi; width > precision; width *= 0.5) ++steps;
  return steps;
}

ExactBoundary exact_boundary(Prober& prober, const SignDirection& d, double r_hi,
                             double precision) {
  const std::uint64_t steps = exact_boundary_cost(r_hi, precision);
  ExactBoundary out;
  double lo = 0.0;
  double hi = r_hi;
  for (std::uint64_t i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (prober.is_adversarial(d, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++out.queries;
  }
  out.upper = hi;
  return out;
}

AttackReport attack_exact(Oracle& oracle, const ImageVector& x, Label y,
                          const AttackConfig& config, double precision) {
  return block_search(
      oracle, x, y, config,
      [precision](Prober& prober, const SignDirection& d_best, double r_best,
                  const SignDirection& d1, const SignDirection& d2) {
        PairResolution step;
        step.best = d_best;
        step.r_best = r_best;
        try {
          for (const SignDirection* candidate : {&d1, &d2}) {
            // Screen against the current best, which may already have moved to d1.
            if (!prober.is_adversarial(*candidate, step.r_best)) continue;
            const ExactBoundary found = exact_boundary(prober, *candidate, step.r_best, precision);
            ++step.bisections;
            if (found.upper < step.r_best) {
              step.best = *candidate;
              step.r_best = found.upper;
              step.observed_adversarial = true;
            }
          }
        } catch (const BudgetExhausted&) {
          step.budget_exhausted = true;
        }
        return step;
      });
}

}  // namespace adba
