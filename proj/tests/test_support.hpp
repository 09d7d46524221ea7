#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "adba/prober.hpp"
#include "adba/sign_direction.hpp"

namespace adba::testing {

/// Synthetic comparator: each registered direction has a fixed boundary g and
/// is adversarial exactly when r >= g. Use +infinity for "never adversarial".
class BoundaryTableProber : public Prober {
 public:
  explicit BoundaryTableProber(std::uint64_t budget = std::numeric_limits<std::uint64_t>::max())
      : budget_(budget) {}

  void set(const SignDirection& d, double boundary) {
    for (auto& [dir, g] : table_) {
      if (dir == d) {
        g = boundary;
        return;
      }
    }
    table_.emplace_back(d, boundary);
  }

  bool is_adversarial(const SignDirection& d, double r) override {
    if (used_ >= budget_) throw BudgetExhausted();
    ++used_;
    probes_.emplace_back(index_of(d), r);
    return r >= table_[index_of(d)].second;
  }

  std::uint64_t queries_used() const override { return used_; }

  /// (direction index in registration order, strength) for every probe.
  const std::vector<std::pair<std::size_t, double>>& probes() const { return probes_; }

 private:
  std::size_t index_of(const SignDirection& d) const {
    for (std::size_t i = 0; i < table_.size(); ++i) {
      if (table_[i].first == d) return i;
    }
    throw std::logic_error("probe of an unregistered direction");
  }

  std::vector<std::pair<SignDirection, double>> table_;
  std::vector<std::pair<std::size_t, double>> probes_;
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
};

/// Three distinct directions of length 4 for comparator tests.
struct DirectionTriple {
  SignDirection best = SignDirection::all_positive(4);
  SignDirection d1 = flip_block(best, {0, 2});
  SignDirection d2 = flip_block(best, {2, 4});
};

}  // namespace adba::testing
