#include <gtest/gtest.h>

#include "adba/baseline.hpp"
#include "adba/toys.hpp"
#include "test_support.hpp"

namespace adba {
namespace {

TEST(ExactBoundary, UnitBracketCostsTenQueries) {
  EXPECT_EQ(exact_boundary_cost(1.0, 0.001), 10u);
  EXPECT_EQ(exact_boundary_cost(0.5, 0.001), 9u);
  EXPECT_EQ(exact_boundary_cost(0.001, 0.001), 0u);
  testing::BoundaryTableProber prober;
  const SignDirection d = SignDirection::all_positive(4);
  prober.set(d, 0.37);
  const ExactBoundary found = exact_boundary(prober, d, 1.0, 0.001);
  EXPECT_EQ(found.queries, 10u);
  EXPECT_EQ(prober.queries_used(), 10u);
  EXPECT_GE(found.upper, 0.37);
  EXPECT_LE(found.upper - 0.37, 0.001);
}

TEST(ExactBoundary, MeanThresholdAnalyticBoundary) {
  MeanThresholdOracle oracle(0.5, 4, 100);
  ImageProber prober(oracle, ImageVector(4, 0.45), Label{0}, 100);
  const ExactBoundary found = exact_boundary(prober, SignDirection::all_positive(4), 1.0, 0.001);
  EXPECT_GT(found.upper, 0.049);
  EXPECT_LE(found.upper, 0.051);
  EXPECT_EQ(oracle.ledger().used(), 10u);
}

TEST(ExactBoundary, BoundaryAtZero) {
  MeanThresholdOracle oracle(0.5, 4, 100);
  ImageProber prober(oracle, ImageVector(4, 0.6), Label{0}, 100);
  const ExactBoundary found = exact_boundary(prober, SignDirection::all_positive(4), 1.0, 0.001);
  EXPECT_LE(found.upper, 0.001);
}

TEST(ExactBoundary, RejectsBadArguments) {
  EXPECT_THROW(exact_boundary_cost(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(exact_boundary_cost(0.0, 0.001), std::invalid_argument);
}

TEST(AttackExact, WorkedTraceOnMeanThreshold) {
  MeanThresholdOracle oracle(0.5, 4, 10000);
  AttackConfig cfg;
  cfg.epsilon = 0.2;
  const AttackReport r = attack_exact(oracle, ImageVector(4, 0.45), Label{0}, cfg);
  EXPECT_EQ(r.status, AttackStatus::kSuccess);
  // init 1; depth 0: both candidates fail their screen (2, no bisection).
  ASSERT_GE(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].queries - r.init_queries, 2u);
  // depth 1: d1 screened and bisected on [0, 1] to 103/1024; d2 screened at
  // that strength and bisected on it in 7 steps without improving.
  EXPECT_EQ(r.r_final, 103.0 / 1024.0);
  EXPECT_EQ(r.queries, 1u + 2u + 11u + 8u);
  EXPECT_EQ(r.bisections, 2u);
  EXPECT_EQ(r.iterations, 2u);
}

TEST(AttackExact, BudgetOfOne) {
  MeanThresholdOracle oracle(0.5, 4, 10000);
  AttackConfig cfg;
  cfg.budget = 1;
  const AttackReport r = attack_exact(oracle, ImageVector(4, 0.45), Label{0}, cfg);
  EXPECT_EQ(r.status, AttackStatus::kBudgetExhausted);
  EXPECT_EQ(r.queries, 1u);
}

TEST(AttackExact, CostsMoreThanAdbaAcrossToySuite) {
  AttackConfig cfg;
  cfg.epsilon = 0.05;
  cfg.budget = 10000;
  std::uint64_t exact_total = 0;
  std::uint64_t adba_total = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const toys::Instance inst = toys::make_instance(seed);
    auto o_exact = inst.model.make_oracle(cfg.budget);
    auto o_adba = inst.model.make_oracle(cfg.budget);
    const AttackReport exact = attack_exact(*o_exact, inst.x, inst.y, cfg);
    const AttackReport adba = attack(*o_adba, inst.x, inst.y, cfg);
    ASSERT_TRUE(exact.success) << "seed " << seed;
    ASSERT_TRUE(adba.success) << "seed " << seed;
    EXPECT_LE(exact.r_final, cfg.epsilon);
    EXPECT_GE(exact.r_final, inst.optimal_boundary);
    exact_total += exact.queries;
    adba_total += adba.queries;
  }
  // Single instances can go either way: one lucky bisection may end an attack.
  EXPECT_GE(exact_total, adba_total);
}

}  // namespace
}  // namespace adba
