#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "adba/compare.hpp"
#include "adba/oracle.hpp"
#include "adba/prober.hpp"
#include "adba/sign_direction.hpp"

namespace adba {

struct AttackConfig {
  double epsilon = 0.05;
  std::uint64_t budget = 10000;
  CompareConfig compare;
  /// Run the extra winner-vs-incumbent comparison after each pair.
  bool ccm = false;
  /// Seeds the random fallback directions used when the all-ones start fails.
  std::uint64_t seed = 0;
  /// Charge the initial F(x) == y check to the budget.
  bool count_verification_query = false;

  /// Throws std::invalid_argument unless tau < epsilon < 1 and budget > 0.
  void validate() const;
};

enum class AttackStatus {
  kSuccess,
  kBudgetExhausted,
  kAlreadyMisclassified,
  kInitFailed,
};

std::string_view to_string(AttackStatus status);

struct TraceEntry {
  std::uint64_t iteration = 0;
  unsigned depth = 0;
  std::size_t block = 0;
  double r_best = 1.0;
  std::uint64_t queries = 0;  // cumulative

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct AttackReport {
  AttackStatus status = AttackStatus::kBudgetExhausted;
  bool success = false;
  SignDirection final_direction;
  double r_final = 1.0;
  std::uint64_t queries = 0;
  std::uint64_t init_queries = 0;
  std::uint64_t iterations = 0;
  /// Exact-boundary bisections performed (baseline only).
  std::uint64_t bisections = 0;
  std::vector<TraceEntry> trace;

  /// Queries spent on comparisons, i.e. everything after initialization.
  std::uint64_t comparison_queries() const noexcept { return queries - init_queries; }
};

/// Position in the block-flip sweep.
///
/// At depth s the direction is cut into min(2^(s+1), N) blocks and the cursor
/// visits them two at a time. When the block count is odd (only possible at
/// the deepest level for non power-of-two N) the last block is paired with
/// block 0.
class BlockSchedule {
 public:
  explicit BlockSchedule(std::size_t n);

  unsigned depth() const noexcept { return depth_; }
  std::size_t cursor() const noexcept { return cursor_; }
  unsigned depth_cap() const noexcept { return depth_cap_; }

  /// Blocks flipped to form d1 and d2 at the current position.
  std::pair<BlockRange, BlockRange> current_pair() const;
  void advance();

 private:
  std::size_t n_;
  unsigned depth_ = 0;
  unsigned depth_cap_;
  std::size_t cursor_ = 0;
  std::vector<BlockRange> blocks_;
};

struct InitResult {
  SignDirection direction;
  double r_best = 1.0;
  std::uint64_t queries = 0;
};

/// Finds a direction adversarial at strength 1: all +1, then all -1, then up
/// to 16 seeded random sign vectors. Returns nullopt when none is adversarial.
/// Propagates BudgetExhausted.
std::optional<InitResult> init_direction(Prober& prober, std::size_t n, std::uint64_t seed);

inline constexpr int kRandomInitCandidates = 16;

/// Outcome of resolving one candidate pair against the incumbent.
struct PairResolution {
  SignDirection best;
  double r_best = 1.0;
  bool observed_adversarial = false;
  bool budget_exhausted = false;
  std::uint64_t bisections = 0;
};

using PairResolver = std::function<PairResolution(
    Prober&, const SignDirection& d_best, double r_best, const SignDirection& d1,
    const SignDirection& d2)>;

/// The block-flip search loop shared by ADBA and the exact baseline; the
/// resolver decides how a candidate pair is compared.
AttackReport block_search(Oracle& oracle, const ImageVector& x, Label y,
                          const AttackConfig& config, const PairResolver& resolve);

/// ADBA / ADBA-md / ADBA-CCM depending on config.compare.rule and config.ccm.
AttackReport attack(Oracle& oracle, const ImageVector& x, Label y, const AttackConfig& config);

}  // namespace adba
