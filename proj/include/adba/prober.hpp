#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "adba/oracle.hpp"
#include "adba/sign_direction.hpp"

namespace adba {

/// clamp(x + r * d, 0, 1) elementwise.
std::vector<double> perturb(const ImageVector& x, const SignDirection& d, double r);

/// Answers "is x + r * d misclassified?" for a fixed anchor image.
///
/// compare_directions and the search loop only ever talk to this interface,
/// which lets tests substitute a synthetic comparator with known boundaries.
class Prober {
 public:
  virtual ~Prober() = default;

  /// Counted probe. Throws BudgetExhausted when no budget is left.
  virtual bool is_adversarial(const SignDirection& d, double r) = 0;

  virtual std::uint64_t queries_used() const = 0;
};

/// Prober over a real oracle with its own per-attack budget cap.
class ImageProber : public Prober {
 public:
  ImageProber(Oracle& oracle, ImageVector x, Label y, std::uint64_t budget);

  bool is_adversarial(const SignDirection& d, double r) override;
  std::uint64_t queries_used() const override { return used_; }

  std::uint64_t budget() const noexcept { return budget_; }
  const ImageVector& anchor() const noexcept { return x_; }
  Label label() const noexcept { return y_; }

 private:
  Oracle& oracle_;
  ImageVector x_;
  Label y_;
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
};

/// Uncounted version of the perturbation predicate.
bool is_adversarial_uncounted(Oracle& oracle, const ImageVector& x, Label y,
                              const SignDirection& d, double r);

class NoBoundary : public std::runtime_error {
 public:
  NoBoundary() : std::runtime_error("direction is not adversarial at strength 1") {}
};

/// Ground-truth boundary g(d) by uncounted bisection to 1e-9 on [0, 1].
/// Assumes the perturbation predicate is monotone in r. Throws NoBoundary when
/// the direction is not adversarial at r = 1.
double true_boundary(Oracle& oracle, const ImageVector& x, Label y, const SignDirection& d);

}  // namespace adba
