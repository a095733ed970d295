#pragma once
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "photocount/errors.hpp"
#include "photocount/montecarlo.hpp"

namespace photocount {

/// Counting-rate estimate with its Poisson-style standard error sqrt(n)/T.
/// The exact inter-gap variance correction is not applied; thresholds in the
/// verification suite are quoted against this documented SE.
struct RateEstimate {
  double rate = 0.0;
  double std_error = 0.0;
  std::size_t n_events = 0;
  bool low_count = false;
};

/// Events per unit time over the train's horizon. An empty train yields a
/// zero estimate flagged low_count.
RateEstimate empirical_rate(const EventTrain& train);

/// Two-sided Kolmogorov-Smirnov statistic of sorted samples against a cdf:
/// D = max_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|). Rejects unsorted or
/// empty input.
template <class Cdf>
double ks_statistic(std::span<const double> sorted_samples, Cdf&& cdf) {
  const std::size_t n = sorted_samples.size();
  if (n == 0)
    throw UsageError("ks_statistic: need at least one sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && sorted_samples[i] < sorted_samples[i - 1])
      throw UsageError("ks_statistic: samples must be sorted ascending");
    const double f = cdf(sorted_samples[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    d = std::max({d, std::fabs(hi), std::fabs(lo)});
  }
  return d;
}

/// Rate of one-to-one coincidences: pairs (t_a, t_b) with
/// |t_b - t_a - delay| <= window/2, matched greedily in time order so each
/// event participates at most once. Trains must share a horizon.
RateEstimate coincidence_rate(const EventTrain& a, const EventTrain& b,
                              double delay, double window);

/// Time-averaged product <I_a(t) I_b(t + delay)> of two uniformly sampled
/// paths on the same grid; delay is rounded to the nearest grid lag. Requires
/// an overlap of at least 10 samples.
double cross_correlation(std::span<const double> path_a,
                         std::span<const double> path_b, double grid_dt,
                         double delay);

/// Coincidence rate expected from uncorrelated trains with the same internal
/// structure: the mean over surrogates in which train b is circularly shifted
/// by a random offset. Destroys cross-correlation, preserves both margins.
RateEstimate shuffled_coincidence_rate(const EventTrain& a,
                                       const EventTrain& b, double delay,
                                       double window, int n_surrogates,
                                       std::uint64_t seed);

} // namespace photocount
