#pragma once

#include <span>
#include <stdexcept>

namespace adba {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Boundary density rho(r) = a / (|d - r / r_ref|^b + c) on [0, r_ref].
///
/// The density is left unnormalized: every consumer works with mass ratios.
/// With flat set, the density is uniform on [0, r_ref] and the shape
/// parameters are ignored.
struct RhoParams {
  double a = 0.0313;
  double b = 3.066;
  double c = 0.168;
  double d = 1.134;
  double r_ref = 1.0;
  bool flat = false;

  static RhoParams reference(double r_ref = 1.0);
  static RhoParams uniform(double r_ref = 1.0);

  /// Same shape rescaled to a new reference strength.
  RhoParams scaled_to(double new_r_ref) const;

  /// Throws DomainError on non-positive a, c, d, r_ref, negative b, or
  /// non-finite values.
  void validate() const;
};

double rho_density(const RhoParams& p, double r);

/// Integral of rho over [lo, hi] by composite Simpson on 1025 points.
double rho_mass(const RhoParams& p, double lo, double hi);

/// m in (start, end) splitting the mass of [start, end] in half.
double conditional_median(const RhoParams& p, double start, double end);

/// Inverse CDF on [0, r_ref]: r with mass(0, r) / mass(0, r_ref) = u.
double sample_boundary(const RhoParams& p, double u);

class TooFewSamples : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RhoFit {
  RhoParams params;
  double residual = 0.0;  // sum of squared residuals over the histogram bins
  int occupied_bins = 0;
  bool low_quality = false;
};

inline constexpr int kFitBins = 50;
inline constexpr std::size_t kMinFitSamples = 200;

/// Least-squares fit of rho (r_ref = 1) to a 50-bin density histogram of
/// normalized boundary samples in [0, 1].
RhoFit fit_rho(std::span<const double> samples);

}  // namespace adba
