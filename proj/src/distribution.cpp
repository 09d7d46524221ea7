#include "adba/distribution.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace adba {

namespace {

constexpr int kSimpsonIntervals = 1024;  // 1025 grid points

void require_in_domain(const RhoParams& p, double r) {
  if (!(r >= 0.0 && r <= p.r_ref)) {
    throw DomainError("strength " + std::to_string(r) + " outside [0, " +
                      std::to_string(p.r_ref) + "]");
  }
}

double density_unchecked(const RhoParams& p, double r) {
  if (p.flat) return 1.0 / p.r_ref;
  return p.a / (std::pow(std::fabs(p.d - r / p.r_ref), p.b) + p.c);
}

double simpson(const RhoParams& p, double lo, double hi) {
  const double h = (hi - lo) / kSimpsonIntervals;
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < kSimpsonIntervals; ++i) {
    const double r = std::min(lo + i * h, hi);
    (i % 2 == 1 ? odd : even) += density_unchecked(p, r);
  }
  return h / 3.0 * (density_unchecked(p, lo) + 4.0 * odd + 2.0 * even +
                    density_unchecked(p, hi));
}

// Finds m in [start, end] with mass(start, m) = fraction * mass(start, end).
// Newton steps on the CDF (its derivative is the density), falling back to
// bisection whenever a step leaves the current bracket.
double solve_mass_fraction(const RhoParams& p, double start, double end, double fraction) {
  const double total = simpson(p, start, end);
  const double target = fraction * total;
  const double tolerance = 1e-10 * total;
  double lo = start;
  double hi = end;
  double m = start + fraction * (end - start);
  for (int iter = 0; iter < 200; ++iter) {
    const double f = simpson(p, start, m) - target;
    if (std::fabs(f) <= tolerance) return m;
    if (f < 0.0) {
      lo = m;
    } else {
      hi = m;
    }
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * p.r_ref) break;
    const double step = m - f / density_unchecked(p, m);
    m = (step > lo && step < hi) ? step : 0.5 * (lo + hi);
  }
  return m;
}

}  // namespace

RhoParams RhoParams::reference(double r_ref) {
  RhoParams p;
  p.r_ref = r_ref;
  return p;
}

RhoParams RhoParams::uniform(double r_ref) {
  RhoParams p;
  p.r_ref = r_ref;
  p.flat = true;
  return p;
}

RhoParams RhoParams::scaled_to(double new_r_ref) const {
  RhoParams p = *this;
  p.r_ref = new_r_ref;
  return p;
}

void RhoParams::validate() const {
  const std::array<double, 5> values{a, b, c, d, r_ref};
  for (double v : values) {
    if (!std::isfinite(v)) throw DomainError("rho parameters must be finite");
  }
  if (!(r_ref > 0.0)) throw DomainError("rho reference strength must be positive");
  if (flat) return;
  if (!(a > 0.0 && c > 0.0 && d > 0.0 && b >= 0.0)) {
    throw DomainError("rho parameters a, c, d must be positive and b non-negative");
  }
}

double rho_density(const RhoParams& p, double r) {
  require_in_domain(p, r);
  return density_unchecked(p, r);
}

double rho_mass(const RhoParams& p, double lo, double hi) {
  require_in_domain(p, lo);
  require_in_domain(p, hi);
  if (lo > hi) throw DomainError("mass interval reversed");
  if (lo == hi) return 0.0;
  return simpson(p, lo, hi);
}

double conditional_median(const RhoParams& p, double start, double end) {
  require_in_domain(p, start);
  require_in_domain(p, end);
  if (!(start < end)) throw DomainError("median bracket must satisfy start < end");
  if (p.flat) return 0.5 * (start + end);
  return solve_mass_fraction(p, start, end, 0.5);
}

double sample_boundary(const RhoParams& p, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sample quantile must lie in (0, 1)");
  if (p.flat) return u * p.r_ref;
  return solve_mass_fraction(p, 0.0, p.r_ref, u);
}

namespace {

struct FitProblem {
  std::array<double, kFitBins> centers{};
  std::array<double, kFitBins> heights{};
};

RhoParams clamp_positive(const gsl_vector* v) {
  constexpr double kFloor = 1e-6;
  RhoParams p;
  p.a = std::max(gsl_vector_get(v, 0), kFloor);
  p.b = std::max(gsl_vector_get(v, 1), kFloor);
  p.c = std::max(gsl_vector_get(v, 2), kFloor);
  p.d = std::max(gsl_vector_get(v, 3), kFloor);
  p.r_ref = 1.0;
  return p;
}

double fit_residual(const gsl_vector* v, void* raw) {
  const auto& problem = *static_cast<const FitProblem*>(raw);
  const RhoParams p = clamp_positive(v);
  double sse = 0.0;
  for (int i = 0; i < kFitBins; ++i) {
    const double diff = density_unchecked(p, problem.centers[i]) - problem.heights[i];
    sse += diff * diff;
  }
  return std::isfinite(sse) ? sse : std::numeric_limits<double>::max();
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

RhoFit fit_rho(std::span<const double> samples) {
  if (samples.size() < kMinFitSamples) {
    throw TooFewSamples("rho fit needs at least " + std::to_string(kMinFitSamples) +
                        " samples, got " + std::to_string(samples.size()));
  }
  FitProblem problem;
  std::array<int, kFitBins> counts{};
  for (double s : samples) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw std::invalid_argument("boundary sample " + std::to_string(s) + " outside [0, 1]");
    }
    const int bin = std::min(static_cast<int>(s * kFitBins), kFitBins - 1);
    ++counts[bin];
  }
  const double width = 1.0 / kFitBins;
  int occupied = 0;
  for (int i = 0; i < kFitBins; ++i) {
    problem.centers[i] = (i + 0.5) * width;
    problem.heights[i] = counts[i] / (static_cast<double>(samples.size()) * width);
    occupied += counts[i] > 0 ? 1 : 0;
  }

  // The histogram integrates to one; rescale the reference amplitude to match
  // so the simplex starts from the reference shape at the right height.
  const RhoParams start = RhoParams::reference();
  const double start_a = start.a / simpson(start, 0.0, 1.0);

  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(4));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(4));
  const std::array<double, 4> initial{start_a, start.b, start.c, start.d};
  for (std::size_t i = 0; i < 4; ++i) {
    gsl_vector_set(x.get(), i, initial[i]);
    gsl_vector_set(step.get(), i, 0.1 * initial[i]);
  }

  gsl_set_error_handler_off();
  gsl_multimin_function objective{&fit_residual, 4, &problem};
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4));
  gsl_multimin_fminimizer_set(minimizer.get(), &objective, x.get(), step.get());

  int status = GSL_CONTINUE;
  for (int iter = 0; iter < 20000 && status == GSL_CONTINUE; ++iter) {
    if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
    status = gsl_multimin_test_size(gsl_multimin_fminimizer_size(minimizer.get()), 1e-10);
  }

  RhoFit fit;
  fit.params = clamp_positive(gsl_multimin_fminimizer_x(minimizer.get()));
  fit.residual = gsl_multimin_fminimizer_minimum(minimizer.get());
  fit.occupied_bins = occupied;
  double energy = 0.0;
  for (double h : problem.heights) energy += h * h;
  fit.low_quality = status != GSL_SUCCESS || occupied < 5 || fit.residual > 0.25 * energy;
  return fit;
}

}  // namespace adba
