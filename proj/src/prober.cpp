#include "adba/prober.hpp"

#include <algorithm>

namespace adba {

std::vector<double> perturb(const ImageVector& x, const SignDirection& d, double r) {
  if (d.size() != x.size()) throw DimensionMismatch(x.size(), d.size());
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("strength outside [0, 1]");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::clamp(x[i] + r * d[i], 0.0, 1.0);
  }
  return out;
}

ImageProber::ImageProber(Oracle& oracle, ImageVector x, Label y, std::uint64_t budget)
    : oracle_(oracle), x_(std::move(x)), y_(y), budget_(budget) {
  if (x_.size() != oracle_.dimension()) throw DimensionMismatch(oracle_.dimension(), x_.size());
}

bool ImageProber::is_adversarial(const SignDirection& d, double r) {
  if (used_ >= budget_) throw BudgetExhausted();
  const std::vector<double> image = perturb(x_, d, r);
  const Label label = oracle_.query(image);
  ++used_;
  return label != y_;
}

bool is_adversarial_uncounted(Oracle& oracle, const ImageVector& x, Label y,
                              const SignDirection& d, double r) {
  return oracle.query_uncounted(perturb(x, d, r)) != y;
}

double true_boundary(Oracle& oracle, const ImageVector& x, Label y, const SignDirection& d) {
  constexpr double kPrecision = 1e-9;
  if (is_adversarial_uncounted(oracle, x, y, d, 0.0)) return 0.0;
  if (!is_adversarial_uncounted(oracle, x, y, d, 1.0)) throw NoBoundary();
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kPrecision) {
    const double mid = 0.5 * (lo + hi);
    if (is_adversarial_uncounted(oracle, x, y, d, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace adba
