#include "adba/search.hpp"

#include <random>
#include <stdexcept>

namespace adba {

void AttackConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  if (!(compare.tau > 0.0 && compare.tau < epsilon)) {
    throw std::invalid_argument("tau must lie in (0, epsilon)");
  }
  if (budget == 0) throw std::invalid_argument("budget must be positive");
  if (compare.max_probe_loops <= 0) throw std::invalid_argument("max_probe_loops must be positive");
  if (compare.rule == ProbeRule::kMedian) compare.rho.validate();
}

std::string_view to_string(AttackStatus status) {
  switch (status) {
    case AttackStatus::kSuccess: return "success";
    case AttackStatus::kBudgetExhausted: return "budget-exhausted";
    case AttackStatus::kAlreadyMisclassified: return "already-misclassified";
    case AttackStatus::kInitFailed: return "init-failed";
  }
  return "unknown";
}

BlockSchedule::BlockSchedule(std::size_t n)
    : n_(n), depth_cap_(max_depth(n)), blocks_(partition_blocks(n, 0)) {}

std::pair<BlockRange, BlockRange> BlockSchedule::current_pair() const {
  const BlockRange first = blocks_[cursor_];
  const BlockRange second = blocks_[(cursor_ + 1) % blocks_.size()];
  return {first, second};
}

void BlockSchedule::advance() {
  cursor_ += 2;
  if (cursor_ >= blocks_.size()) {
    cursor_ = 0;
    if (depth_ < depth_cap_) {
      ++depth_;
      blocks_ = partition_blocks(n_, depth_);
    }
  }
}

std::optional<InitResult> init_direction(Prober& prober, std::size_t n, std::uint64_t seed) {
  const std::uint64_t before = prober.queries_used();
  auto accept = [&](SignDirection d) -> std::optional<InitResult> {
    if (!prober.is_adversarial(d, 1.0)) return std::nullopt;
    return InitResult{std::move(d), 1.0, prober.queries_used() - before};
  };
  if (auto hit = accept(SignDirection::all_positive(n))) return hit;
  if (auto hit = accept(SignDirection::all_negative(n))) return hit;
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < kRandomInitCandidates; ++attempt) {
    SignDirection d = SignDirection::all_positive(n);
    for (std::size_t i = 0; i < n; ++i) {
      if ((rng() >> 63) == 0) d.set(i, -1);
    }
    if (auto hit = accept(std::move(d))) return hit;
  }
  return std::nullopt;
}

AttackReport block_search(Oracle& oracle, const ImageVector& x, Label y,
                          const AttackConfig& config, const PairResolver& resolve) {
  config.validate();
  if (x.size() != oracle.dimension()) throw DimensionMismatch(oracle.dimension(), x.size());
  const std::size_t n = x.size();

  AttackReport report;
  report.final_direction = SignDirection::all_positive(n);
  ImageProber prober(oracle, x, y, config.budget);

  try {
    const bool misclassified = config.count_verification_query
                                   ? prober.is_adversarial(report.final_direction, 0.0)
                                   : oracle.query_uncounted(x.values()) != y;
    if (misclassified) {
      report.status = AttackStatus::kAlreadyMisclassified;
      report.r_final = 0.0;
      report.queries = report.init_queries = prober.queries_used();
      return report;
    }
    auto start = init_direction(prober, n, config.seed);
    report.queries = report.init_queries = prober.queries_used();
    if (!start) {
      report.status = AttackStatus::kInitFailed;
      return report;
    }
    report.final_direction = std::move(start->direction);
    report.r_final = start->r_best;
  } catch (const BudgetExhausted&) {
    report.status = AttackStatus::kBudgetExhausted;
    report.queries = report.init_queries = prober.queries_used();
    return report;
  }

  SignDirection& d_best = report.final_direction;
  double& r_best = report.r_final;
  bool observed = true;
  bool exhausted = false;
  BlockSchedule schedule(n);

  while (true) {
    if (r_best <= config.epsilon) {
      if (!observed) {
        try {
          if (!prober.is_adversarial(d_best, r_best)) {
            throw std::logic_error("best direction not adversarial on re-check; oracle is not deterministic");
          }
          observed = true;
        } catch (const BudgetExhausted&) {
          exhausted = true;
        }
      }
      if (observed) {
        report.status = AttackStatus::kSuccess;
        report.success = true;
        break;
      }
    }
    if (exhausted || prober.queries_used() >= config.budget) {
      report.status = AttackStatus::kBudgetExhausted;
      break;
    }

    const auto [first, second] = schedule.current_pair();
    const SignDirection d1 = flip_block(d_best, first);
    const SignDirection d2 = flip_block(d_best, second);
    PairResolution step = resolve(prober, d_best, r_best, d1, d2);
    ++report.iterations;
    report.bisections += step.bisections;

    const bool unchanged = step.best == d_best && step.r_best == r_best;
    observed = step.observed_adversarial || (unchanged && observed);
    if (step.r_best > r_best) throw std::logic_error("pair resolver increased r_best");
    d_best = std::move(step.best);
    r_best = step.r_best;
    report.trace.push_back(
        {report.iterations, schedule.depth(), schedule.cursor(), r_best, prober.queries_used()});
    exhausted = step.budget_exhausted;
    schedule.advance();
  }
  report.queries = prober.queries_used();
  return report;
}

AttackReport attack(Oracle& oracle, const ImageVector& x, Label y, const AttackConfig& config) {
  const CompareConfig compare = config.compare;
  const bool ccm = config.ccm;
  return block_search(
      oracle, x, y, config,
      [compare, ccm](Prober& prober, const SignDirection& d_best, double r_best,
                     const SignDirection& d1, const SignDirection& d2) {
        ComparisonOutcome outcome = ccm ? ccm_compare(prober, d_best, r_best, d1, d2, compare)
                                        : compare_directions(prober, d_best, r_best, d1, d2, compare);
        PairResolution step;
        step.best = std::move(outcome.winner);
        step.r_best = outcome.adb;
        step.observed_adversarial = outcome.observed_adversarial;
        step.budget_exhausted = outcome.status == CompareStatus::kBudgetExhausted;
        return step;
      });
}

}  // namespace adba
