#pragma once
#include "photocount/core_model.hpp"
#include "photocount/errors.hpp"

namespace photocount {

/// The constant-drift absorbing-barrier first-passage problem: accumulated
/// energy drifts upward at `drift` with white noise of scale `noise_scale`,
/// and is absorbed at `threshold`. Everything in this module is a closed form
/// over these three numbers. The entrance area is fixed to 1 here; callers
/// with a different area pre-scale drift and noise_scale.
class FptLaw {
public:
  FptLaw(double threshold, double drift, double noise_scale);

  double threshold() const { return threshold_; }
  double drift() const { return drift_; }
  double noise_scale() const { return noise_scale_; }

private:
  double threshold_;
  double drift_;
  double noise_scale_;
};

/// Builds the law seen by a detector watching a constant signal: drift and
/// noise are scaled by the entrance area.
FptLaw law_for(const DetectorParams& p, double signal_intensity);

/// Density over energy of the still-unabsorbed process at time t: the free
/// Gaussian minus its drift-weighted image across the barrier. Exactly 0 at
/// the barrier and non-negative below it. Requires t > 0 and E <= threshold.
double transition_density(const FptLaw& law, double energy, double t);

/// Probability that absorption happened by time t. 0 at t = 0, non-decreasing,
/// tends to 1 for any drift >= 0. Evaluated in a form that stays finite for
/// arbitrarily large 2*threshold*drift/noise_scale^2.
double cdf(const FptLaw& law, double t);

/// First-passage density over time (the inverse-Gaussian density with mean
/// threshold/drift and shape (threshold/noise_scale)^2). Requires t > 0.
double pdf(const FptLaw& law, double t);

/// Mean first-passage time, threshold/drift. Throws InfiniteMeanError for a
/// zero-drift law, whose mean diverges.
double mean_fpt(const FptLaw& law);

/// Steady counting rate drift/threshold; 0 when the drift is 0 (the noise
/// background alone sustains no steady rate).
double rate(const FptLaw& law);

/// The unique t with cdf(law, t) = 1/2, by bracketed bisection to relative
/// tolerance 1e-12. Finite for every law, including zero drift.
double median_fpt(const FptLaw& law);

namespace detail {
/// Scaled complementary error function exp(x^2) * erfc(x) for x >= 0.
double erfcx(double x);
} // namespace detail

} // namespace photocount
