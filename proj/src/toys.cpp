#include "adba/toys.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace adba::toys {

std::unique_ptr<ToyLinearOracle> LinearModel::make_oracle(std::uint64_t budget) const {
  return std::make_unique<ToyLinearOracle>(weights, bias, dimension, budget);
}

Label LinearModel::predict(const ImageVector& x) const {
  ToyLinearOracle oracle(weights, bias, dimension, 1);
  return oracle.query_uncounted(x.values());
}

LinearModel random_linear_model(std::uint64_t seed, std::size_t n, std::uint32_t k) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(static_cast<double>(n)));
  LinearModel m;
  m.dimension = n;
  m.class_count = k;
  m.weights.resize(static_cast<std::size_t>(k) * n);
  for (double& w : m.weights) w = gauss(rng);
  m.bias.assign(k, 0.0);
  return m;
}

Instance make_instance(std::uint64_t seed, const InstanceOptions& options) {
  const std::size_t n = options.dimension;
  const std::uint32_t k = options.class_count;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pixel(0.25, 0.75);
  std::uniform_real_distribution<double> boundary(options.min_boundary, options.max_boundary);

  while (true) {
    LinearModel model = random_linear_model(rng(), n, k);
    std::vector<double> xs(n);
    for (double& v : xs) v = pixel(rng);
    ImageVector x(std::move(xs));
    const Label y = model.predict(x);
    const double target = boundary(rng);

    // Raise b_y so that min_j ((w_y - w_j) . x + b_y - b_j) / ||w_y - w_j||_1 == target.
    const auto row = [&](std::uint32_t c) { return model.weights.data() + std::size_t{c} * n; };
    double needed = -std::numeric_limits<double>::infinity();
    for (std::uint32_t j = 0; j < k; ++j) {
      if (j == y.class_id) continue;
      double dot = 0.0;
      double l1 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double diff = row(y.class_id)[i] - row(j)[i];
        dot += diff * x[i];
        l1 += std::fabs(diff);
      }
      needed = std::max(needed, target * l1 - dot + model.bias[j]);
    }
    model.bias[y.class_id] = needed;

    const ImageVector saturated(n, 1.0);
    if (model.predict(x) != y || model.predict(saturated) == y) continue;
    return Instance{std::move(model), std::move(x), y, target};
  }
}

}  // namespace adba::toys
