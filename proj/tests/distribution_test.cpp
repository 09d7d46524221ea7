#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "adba/distribution.hpp"

namespace adba {
namespace {

// Independent quadrature: composite trapezoid written straight from the formula.
double trapezoid_mass(double lo, double hi, int n) {
  const double a = 0.0313, b = 3.066, c = 0.168, d = 1.134;
  auto f = [&](double r) { return a / (std::pow(std::fabs(d - r), b) + c); };
  const double h = (hi - lo) / n;
  double sum = 0.5 * (f(lo) + f(hi));
  for (int i = 1; i < n; ++i) sum += f(lo + i * h);
  return sum * h;
}

TEST(RhoDensity, ReferenceValuesAtEndpoints) {
  const RhoParams p = RhoParams::reference();
  EXPECT_NEAR(rho_density(p, 0.0), 0.0313 / (std::pow(1.134, 3.066) + 0.168), 1e-15);
  EXPECT_NEAR(rho_density(p, 0.0), 0.0191, 5e-5);
  EXPECT_NEAR(rho_density(p, 1.0), 0.184, 5e-4);
}

TEST(RhoDensity, DomainChecks) {
  const RhoParams p = RhoParams::reference(0.5);
  EXPECT_THROW(rho_density(p, 0.6), DomainError);
  EXPECT_THROW(rho_density(p, -1e-12), DomainError);
  EXPECT_THROW(rho_mass(p, 0.3, 0.2), DomainError);
  RhoParams bad = RhoParams::reference();
  bad.c = 0.0;
  EXPECT_THROW(bad.validate(), DomainError);
  bad = RhoParams::reference();
  bad.a = std::nan("");
  EXPECT_THROW(bad.validate(), DomainError);
  EXPECT_NO_THROW(RhoParams::reference().validate());
}

TEST(RhoMass, EmptyIntervalIsZero) {
  EXPECT_EQ(rho_mass(RhoParams::reference(), 0.3, 0.3), 0.0);
}

TEST(RhoMass, AgreesWithIndependentTrapezoid) {
  const double simpson = rho_mass(RhoParams::reference(), 0.0, 1.0);
  const double oracle = trapezoid_mass(0.0, 1.0, 1000000);
  EXPECT_LE(std::fabs(simpson - oracle) / oracle, 1e-8);
}

TEST(RhoMass, Additivity) {
  const RhoParams p = RhoParams::reference();
  const double total = rho_mass(p, 0.0, 1.0);
  for (double m : {0.01, 0.2, 0.5, 0.77, 0.999}) {
    EXPECT_NEAR(rho_mass(p, 0.0, m) + rho_mass(p, m, 1.0), total, 1e-10) << m;
  }
}

TEST(RhoMass, ScalesWithReference) {
  // Substituting r = s * r_ref: mass over [0, r_ref] is r_ref times the unit mass.
  const RhoParams unit = RhoParams::reference();
  EXPECT_NEAR(rho_mass(unit.scaled_to(0.25), 0.0, 0.25), 0.25 * rho_mass(unit, 0.0, 1.0), 1e-12);
}

TEST(ConditionalMedian, FlatRuleIsMidpoint) {
  EXPECT_EQ(conditional_median(RhoParams::uniform(), 0.0, 1.0), 0.5);
  EXPECT_EQ(conditional_median(RhoParams::uniform(), 0.25, 0.75), 0.5);
}

TEST(ConditionalMedian, ReferenceOnUnitIsAboveMidpoint) {
  const RhoParams p = RhoParams::reference();
  const double m = conditional_median(p, 0.0, 1.0);
  EXPECT_GT(m, 0.5);
  const double total = trapezoid_mass(0.0, 1.0, 200000);
  EXPECT_NEAR(trapezoid_mass(0.0, m, 200000) / total, 0.5, 1e-6);
}

TEST(ConditionalMedian, HalfMassOnRandomBrackets) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double r_ref = 0.01 + 0.99 * unit(rng);
    const RhoParams p = RhoParams::reference(r_ref);
    double s = unit(rng) * r_ref;
    double e = unit(rng) * r_ref;
    if (s > e) std::swap(s, e);
    if (e - s < 1e-9) continue;
    const double m = conditional_median(p, s, e);
    ASSERT_GT(m, s);
    ASSERT_LT(m, e);
    const double ratio = rho_mass(p, s, m) / rho_mass(p, s, e);
    ASSERT_NEAR(ratio, 0.5, 1e-6) << "bracket [" << s << ", " << e << "]";
  }
}

TEST(ConditionalMedian, MonotoneInBothEndpoints) {
  const RhoParams p = RhoParams::reference();
  double prev = 0.0;
  for (double s = 0.0; s < 0.9; s += 0.05) {
    const double m = conditional_median(p, s, 0.95);
    EXPECT_GT(m, prev);
    prev = m;
  }
  prev = 1.0;
  for (double e = 1.0; e > 0.1; e -= 0.05) {
    const double m = conditional_median(p, 0.05, e);
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(ConditionalMedian, RejectsEmptyBracket) {
  EXPECT_THROW(conditional_median(RhoParams::reference(), 0.5, 0.5), DomainError);
  EXPECT_THROW(conditional_median(RhoParams::reference(), 0.5, 1.5), DomainError);
}

TEST(SampleBoundary, MedianCoincidesWithConditionalMedian) {
  const RhoParams p = RhoParams::reference(0.4);
  EXPECT_NEAR(sample_boundary(p, 0.5), conditional_median(p, 0.0, 0.4), 1e-9);
}

TEST(SampleBoundary, Limits) {
  const RhoParams p = RhoParams::reference();
  EXPECT_LT(sample_boundary(p, 1e-9), 1e-6);
  EXPECT_GT(sample_boundary(p, 1.0 - 1e-9), 1.0 - 1e-6);
  EXPECT_THROW(sample_boundary(p, 0.0), DomainError);
  EXPECT_THROW(sample_boundary(p, 1.0), DomainError);
}

TEST(SampleBoundary, KolmogorovDistanceToQuadratureCdf) {
  const RhoParams p = RhoParams::reference();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> samples(100000);
  for (double& s : samples) {
    double u = unit(rng);
    while (u == 0.0) u = unit(rng);
    s = sample_boundary(p, u);
  }
  std::sort(samples.begin(), samples.end());
  // Reference CDF tabulated once by the trapezoid oracle on a fine grid.
  constexpr int kGrid = 20000;
  std::vector<double> cdf(kGrid + 1, 0.0);
  const double h = 1.0 / kGrid;
  auto f = [](double r) { return 0.0313 / (std::pow(std::fabs(1.134 - r), 3.066) + 0.168); };
  for (int i = 1; i <= kGrid; ++i) cdf[i] = cdf[i - 1] + 0.5 * h * (f((i - 1) * h) + f(i * h));
  for (double& v : cdf) v /= cdf[kGrid];
  auto reference_cdf = [&](double r) {
    const double pos = r / h;
    const int i = std::min(static_cast<int>(pos), kGrid - 1);
    return cdf[i] + (pos - i) * (cdf[i + 1] - cdf[i]);
  };
  double distance = 0.0;
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double F = reference_cdf(samples[i]);
    distance = std::max({distance, std::fabs((i + 1) / n - F), std::fabs(i / n - F)});
  }
  EXPECT_LE(distance, 0.01);
}

TEST(FitRho, RecoversGeneratorDensityShape) {
  const RhoParams p = RhoParams::reference();
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> samples(20000);
  for (double& s : samples) {
    double u = unit(rng);
    while (u == 0.0) u = unit(rng);
    s = sample_boundary(p, u);
  }
  const RhoFit fit = fit_rho(samples);
  EXPECT_FALSE(fit.low_quality);

  std::vector<int> counts(kFitBins, 0);
  for (double s : samples) ++counts[std::min(static_cast<int>(s * kFitBins), kFitBins - 1)];
  // Compare normalized densities bin by bin.
  const double fit_total = rho_mass(fit.params, 0.0, 1.0);
  const double gen_total = rho_mass(p, 0.0, 1.0);
  int compared = 0;
  for (int i = 0; i < kFitBins; ++i) {
    if (counts[i] < 5) continue;
    const double center = (i + 0.5) / kFitBins;
    const double ratio = (rho_density(fit.params, center) / fit_total) /
                         (rho_density(p, center) / gen_total);
    EXPECT_GE(ratio, 0.7) << "bin " << i;
    EXPECT_LE(ratio, 1.4) << "bin " << i;
    ++compared;
  }
  EXPECT_GT(compared, 40);
}

TEST(FitRho, TooFewSamples) {
  EXPECT_THROW(fit_rho(std::vector<double>(100, 0.5)), TooFewSamples);
}

TEST(FitRho, RejectsOutOfRangeSamples) {
  std::vector<double> samples(300, 0.5);
  samples[17] = 1.5;
  EXPECT_THROW(fit_rho(samples), std::invalid_argument);
}

TEST(FitRho, DegenerateHistogramIsLowQuality) {
  const RhoFit fit = fit_rho(std::vector<double>(500, 0.5));
  EXPECT_TRUE(fit.low_quality);
  EXPECT_EQ(fit.occupied_bins, 1);
  EXPECT_GT(fit.params.a, 0.0);
  EXPECT_GT(fit.params.b, 0.0);
  EXPECT_GT(fit.params.c, 0.0);
  EXPECT_GT(fit.params.d, 0.0);
}

}  // namespace
}  // namespace adba
