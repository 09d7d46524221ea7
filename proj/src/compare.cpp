#include "adba/compare.hpp"

#include <array>
#include <map>
#include <utility>

namespace adba {

namespace {

// Memo for (direction slot, strength) -> adversarial within one comparison.
class PairMemo {
 public:
  explicit PairMemo(Prober& prober) : prober_(prober) {}

  bool probe(int slot, const SignDirection& d, double r) {
    const auto key = std::make_pair(slot, r);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const bool adversarial = prober_.is_adversarial(d, r);
    ++spent_;
    cache_.emplace(key, adversarial);
    return adversarial;
  }

  void remember(int slot, double r, bool adversarial) {
    cache_.emplace(std::make_pair(slot, r), adversarial);
  }

  std::uint64_t spent() const noexcept { return spent_; }

 private:
  Prober& prober_;
  std::map<std::pair<int, double>, bool> cache_;
  std::uint64_t spent_ = 0;
};

constexpr int kSlotBest = 0;
constexpr int kSlotD1 = 1;
constexpr int kSlotD2 = 2;

void validate(double r_best, const CompareConfig& config) {
  if (!(r_best > 0.0 && r_best <= 1.0)) {
    throw std::invalid_argument("r_best must lie in (0, 1]");
  }
  if (!(config.tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (config.max_probe_loops <= 0) throw std::invalid_argument("max_probe_loops must be positive");
}

}  // namespace

std::string_view to_string(CompareStatus status) {
  switch (status) {
    case CompareStatus::kKeptBest: return "kept-best";
    case CompareStatus::kWinnerD1: return "winner-d1";
    case CompareStatus::kWinnerD2: return "winner-d2";
    case CompareStatus::kToleranceExit: return "tolerance-exit";
    case CompareStatus::kBudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

double next_probe(const CompareConfig& config, double r_best, double start, double end) {
  if (config.rule == ProbeRule::kMedian) {
    return conditional_median(config.rho.scaled_to(r_best), start, end);
  }
  return 0.5 * (start + end);
}

ComparisonOutcome compare_directions(Prober& prober, const SignDirection& d_best, double r_best,
                                     const SignDirection& d1, const SignDirection& d2,
                                     const CompareConfig& config) {
  validate(r_best, config);
  PairMemo memo(prober);
  ComparisonOutcome out;
  bool bracket_open = false;
  double start = 0.0;
  double end = r_best;
  try {
    const bool adv1 = memo.probe(kSlotD1, d1, r_best);
    const bool adv2 = memo.probe(kSlotD2, d2, r_best);
    if (!adv1 && !adv2) {
      out.winner = d_best;
      out.adb = r_best;
      out.status = CompareStatus::kKeptBest;
    } else if (adv1 != adv2) {
      out.winner = adv1 ? d1 : d2;
      out.adb = r_best;
      out.status = adv1 ? CompareStatus::kWinnerD1 : CompareStatus::kWinnerD2;
      out.observed_adversarial = true;
    } else {
      bracket_open = true;
      out.status = CompareStatus::kToleranceExit;
      while (end - start > config.tau && out.attempts < config.max_probe_loops) {
        const double probe = next_probe(config, r_best, start, end);
        ++out.attempts;
        const bool p1 = memo.probe(kSlotD1, d1, probe);
        const bool p2 = memo.probe(kSlotD2, d2, probe);
        if (p1 && p2) {
          end = probe;
        } else if (!p1 && !p2) {
          start = probe;
        } else {
          out.winner = p1 ? d1 : d2;
          out.adb = probe;
          out.status = p1 ? CompareStatus::kWinnerD1 : CompareStatus::kWinnerD2;
          out.observed_adversarial = true;
          break;
        }
      }
      if (out.status == CompareStatus::kToleranceExit) {
        // Both directions were seen adversarial at end, so d1 at end is safe.
        out.winner = d1;
        out.adb = end;
        out.observed_adversarial = true;
      }
    }
  } catch (const BudgetExhausted&) {
    out.status = CompareStatus::kBudgetExhausted;
    if (bracket_open) {
      out.winner = d1;
      out.adb = end;
      out.observed_adversarial = true;
    } else {
      out.winner = d_best;
      out.adb = r_best;
      out.observed_adversarial = false;
    }
  }
  out.queries_used = memo.spent();
  return out;
}

ComparisonOutcome ccm_compare(Prober& prober, const SignDirection& d_best, double r_best,
                              const SignDirection& d1, const SignDirection& d2,
                              const CompareConfig& config) {
  ComparisonOutcome out = compare_directions(prober, d_best, r_best, d1, d2, config);
  const bool new_winner = out.status == CompareStatus::kWinnerD1 ||
                          out.status == CompareStatus::kWinnerD2 ||
                          out.status == CompareStatus::kToleranceExit;
  if (!new_winner) return out;

  constexpr int kSlotWinner = 1;
  PairMemo memo(prober);
  memo.remember(kSlotWinner, out.adb, true);
  const SignDirection winner = out.winner;
  double start = 0.0;
  double end = out.adb;
  try {
    if (memo.probe(kSlotBest, d_best, end)) {
      int loops = 0;
      while (end - start > config.tau && loops < config.max_probe_loops) {
        const double probe = next_probe(config, r_best, start, end);
        ++loops;
        const bool w = memo.probe(kSlotWinner, winner, probe);
        const bool b = memo.probe(kSlotBest, d_best, probe);
        if (w && b) {
          end = probe;
        } else if (!w && !b) {
          start = probe;
        } else {
          if (b) {
            out.winner = d_best;
            out.status = CompareStatus::kKeptBest;
          }
          end = probe;
          break;
        }
      }
      out.adb = end;
      out.attempts += loops;
    }
  } catch (const BudgetExhausted&) {
    // end only ever moves to strengths where the winner was adversarial.
    out.winner = winner;
    out.adb = end;
    out.status = CompareStatus::kBudgetExhausted;
  }
  out.queries_used += memo.spent();
  return out;
}

}  // namespace adba
