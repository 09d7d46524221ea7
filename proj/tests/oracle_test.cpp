#include <gtest/gtest.h>

#include <random>

#include "adba/oracle.hpp"
#include "adba/prober.hpp"
#include "adba/toys.hpp"

namespace adba {
namespace {

// Records every image the model sees.
class RecordingOracle : public Oracle {
 public:
  explicit RecordingOracle(std::size_t n) : Oracle(n, 2, 1000) {}
  std::vector<std::vector<double>> seen;

 protected:
  Label classify(std::span<const double> image) override {
    seen.emplace_back(image.begin(), image.end());
    return Label{0};
  }
};

TEST(Query, MeanThresholdBelowIsClassZero) {
  MeanThresholdOracle oracle(0.5, 4, 10);
  EXPECT_EQ(oracle.query(ImageVector(4, 0.45).values()).class_id, 0u);
  EXPECT_EQ(oracle.ledger().used(), 1u);
}

TEST(Query, LinearTieGoesToLowestIndex) {
  ToyLinearOracle oracle(std::vector<double>(2 * 3, 0.0), {0.0, 0.0}, 3, 10);
  EXPECT_EQ(oracle.query(ImageVector(3, 0.7).values()).class_id, 0u);
}

TEST(Query, LinearArgmax) {
  // scores: (x0 - x1, x1 - x0 + 0.1, 0)
  ToyLinearOracle oracle({1, -1, -1, 1, 0, 0}, {0.0, 0.1, 0.0}, 2, 10);
  EXPECT_EQ(oracle.query(std::vector<double>{0.9, 0.1}).class_id, 0u);
  EXPECT_EQ(oracle.query(std::vector<double>{0.5, 0.5}).class_id, 1u);
}

TEST(Query, BudgetExhaustionAndDimensionMismatch) {
  MeanThresholdOracle oracle(0.5, 4, 2);
  const ImageVector x(4, 0.2);
  oracle.query(x.values());
  oracle.query(x.values());
  EXPECT_THROW(oracle.query(x.values()), BudgetExhausted);
  EXPECT_EQ(oracle.ledger().used(), 2u);
  // Uncounted queries are not limited by the ledger.
  EXPECT_EQ(oracle.query_uncounted(x.values()).class_id, 0u);

  MeanThresholdOracle fresh(0.5, 4, 2);
  EXPECT_THROW(fresh.query(std::vector<double>(3, 0.1)), DimensionMismatch);
  EXPECT_EQ(fresh.ledger().used(), 0u);
}

TEST(ImageVector, RejectsOutOfRange) {
  EXPECT_THROW(ImageVector(std::vector<double>{0.1, 1.2}), std::invalid_argument);
  EXPECT_THROW(ImageVector(std::vector<double>{}), std::invalid_argument);
}

TEST(QueryPerturbed, ZeroStrengthIsIdentity) {
  MeanThresholdOracle oracle(0.5, 4, 10);
  ImageProber prober(oracle, ImageVector(4, 0.45), Label{0}, 10);
  EXPECT_FALSE(prober.is_adversarial(SignDirection::all_positive(4), 0.0));
  EXPECT_EQ(prober.queries_used(), 1u);
  EXPECT_EQ(oracle.ledger().used(), 1u);
}

TEST(QueryPerturbed, ClampsAtUpperBound) {
  ImageVector x(std::vector<double>{0.9, 0.1});
  SignDirection d = SignDirection::all_positive(2);
  d.set(1, -1);
  const auto image = perturb(x, d, 0.2);
  EXPECT_EQ(image[0], 1.0);
  EXPECT_EQ(image[1], 0.0);
}

TEST(QueryPerturbed, MeanCrossesThreshold) {
  // mean(0.45 + 0.06) = 0.51 > 0.5
  MeanThresholdOracle oracle(0.5, 4, 10);
  ImageProber prober(oracle, ImageVector(4, 0.45), Label{0}, 10);
  EXPECT_TRUE(prober.is_adversarial(SignDirection::all_positive(4), 0.06));
}

TEST(QueryPerturbed, ProberBudgetIsIndependentOfOracleLedger) {
  MeanThresholdOracle oracle(0.5, 4, 100);
  ImageProber prober(oracle, ImageVector(4, 0.45), Label{0}, 1);
  prober.is_adversarial(SignDirection::all_positive(4), 0.1);
  EXPECT_THROW(prober.is_adversarial(SignDirection::all_positive(4), 0.1), BudgetExhausted);
  EXPECT_EQ(oracle.ledger().used(), 1u);
}

TEST(TrueBoundary, MeanThresholdAnalytic) {
  // mean(x) + r = 0.5 at r = 0.05
  MeanThresholdOracle oracle(0.5, 4, 1);
  const double g = true_boundary(oracle, ImageVector(4, 0.45), Label{0}, SignDirection::all_positive(4));
  EXPECT_NEAR(g, 0.05, 1e-9);
  EXPECT_EQ(oracle.ledger().used(), 0u);
}

TEST(TrueBoundary, BalancedDirectionNeverCrosses) {
  // Half the entries move up, half down; clamping at 0 only lowers the mean.
  MeanThresholdOracle oracle(0.5, 4, 1);
  const SignDirection d = flip_block(SignDirection::all_positive(4), {0, 2});
  EXPECT_THROW(true_boundary(oracle, ImageVector(4, 0.45), Label{0}, d), NoBoundary);
}

TEST(TrueBoundary, AlreadyMisclassifiedIsZero) {
  MeanThresholdOracle oracle(0.5, 4, 1);
  EXPECT_LE(true_boundary(oracle, ImageVector(4, 0.6), Label{0}, SignDirection::all_positive(4)), 1e-9);
}

TEST(OracleProperties, ClampContainmentAndDeterminism) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RecordingOracle oracle(16);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs(16);
    for (double& v : xs) v = unit(rng);
    SignDirection d = SignDirection::all_positive(16);
    for (std::size_t i = 0; i < 16; ++i) d.set(i, (rng() & 1U) ? 1 : -1);
    ImageProber prober(oracle, ImageVector(xs), Label{1}, 10);
    const double r = unit(rng);
    EXPECT_EQ(prober.is_adversarial(d, r), prober.is_adversarial(d, r));
  }
  for (const auto& image : oracle.seen) {
    for (double v : image) ASSERT_TRUE(v >= 0.0 && v <= 1.0);
  }
}

TEST(OracleProperties, TrueBoundaryConsistentWithProbes) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const toys::Instance inst = toys::make_instance(seed, {.dimension = 32});
    auto oracle = inst.model.make_oracle(100000);
    SignDirection d = SignDirection::all_positive(32);
    for (std::size_t i = 0; i < 32; ++i) d.set(i, (rng() & 1U) ? 1 : -1);
    double g = 0.0;
    try {
      g = true_boundary(*oracle, inst.x, inst.y, d);
    } catch (const NoBoundary&) {
      continue;
    }
    // Restrict to the unclamped region, where the predicate is monotone.
    const double r_max = 0.25;
    if (g > r_max) continue;
    ImageProber prober(*oracle, inst.x, inst.y, 1000);
    for (int k = 0; k < 20; ++k) {
      const double r = unit(rng) * r_max;
      if (std::abs(r - g) <= 1e-9) continue;
      ASSERT_EQ(prober.is_adversarial(d, r), r >= g) << "seed " << seed << " r " << r << " g " << g;
    }
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

TEST(ToyInstance, OptimalBoundaryIsExact) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const toys::Instance inst = toys::make_instance(seed);
    auto oracle = inst.model.make_oracle(1);
    // The optimal direction for a linear model flips toward the closest class.
    double best = 1.0;
    const std::size_t n = inst.x.size();
    for (std::uint32_t j = 0; j < inst.model.class_count; ++j) {
      if (j == inst.y.class_id) continue;
      SignDirection d = SignDirection::all_positive(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double diff = inst.model.weights[j * n + i] - inst.model.weights[inst.y.class_id * n + i];
        d.set(i, diff >= 0 ? 1 : -1);
      }
      try {
        best = std::min(best, true_boundary(*oracle, inst.x, inst.y, d));
      } catch (const NoBoundary&) {
      }
    }
    EXPECT_NEAR(best, inst.optimal_boundary, 1e-8) << "seed " << seed;
    EXPECT_GE(inst.optimal_boundary, 0.01);
    EXPECT_LE(inst.optimal_boundary, 0.04);
  }
}

}  // namespace
}  // namespace adba
