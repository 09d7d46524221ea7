#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "adba/oracle.hpp"

namespace adba::toys {

struct LinearModel {
  std::size_t dimension = 0;
  std::uint32_t class_count = 0;
  std::vector<double> weights;  // row-major K x N
  std::vector<double> bias;

  std::unique_ptr<ToyLinearOracle> make_oracle(std::uint64_t budget) const;
  Label predict(const ImageVector& x) const;
};

/// Gaussian weights scaled by 1/sqrt(N), zero bias.
LinearModel random_linear_model(std::uint64_t seed, std::size_t n, std::uint32_t k);

/// A linear model and an anchor image whose optimal l-infinity boundary is
/// known in closed form.
struct Instance {
  LinearModel model;
  ImageVector x;
  Label y;
  /// min over wrong classes j of margin_j / ||w_y - w_j||_1; exact while
  /// x +/- optimal_boundary stays inside [0, 1].
  double optimal_boundary = 0.0;
};

struct InstanceOptions {
  std::size_t dimension = 64;
  std::uint32_t class_count = 3;
  double min_boundary = 0.01;
  double max_boundary = 0.04;
};

/// Anchors are drawn from [0.25, 0.75]^N; the true class bias is raised until
/// the optimal boundary equals a draw from [min_boundary, max_boundary].
/// Instances whose saturated all-ones image keeps the true class are
/// rejected, so the default starting direction is adversarial at strength 1.
Instance make_instance(std::uint64_t seed, const InstanceOptions& options = {});

}  // namespace adba::toys
