#include "photocount/stats.hpp"

#include <algorithm>
#include <cmath>

#include "photocount/rng.hpp"

namespace photocount {

RateEstimate empirical_rate(const EventTrain& train) {
  if (!(train.horizon() > 0.0))
    throw DomainError("empirical_rate: horizon must be > 0");
  const auto n = train.size();
  if (n == 0)
    return {0.0, 0.0, 0, true};
  const double t = train.horizon();
  return {static_cast<double>(n) / t, std::sqrt(static_cast<double>(n)) / t, n,
          false};
}

RateEstimate coincidence_rate(const EventTrain& a, const EventTrain& b,
                              double delay, double window) {
  if (!(window > 0.0))
    throw DomainError("coincidence_rate: window must be > 0");
  if (a.horizon() != b.horizon())
    throw UsageError("coincidence_rate: trains must share a horizon");
  const auto& ta = a.timestamps();
  const auto& tb = b.timestamps();
  const double half = 0.5 * window;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t matches = 0;
  while (i < ta.size() && j < tb.size()) {
    const double target = ta[i] + delay;
    if (tb[j] < target - half) {
      ++j;
    } else if (tb[j] > target + half) {
      ++i;
    } else {
      ++matches;
      ++i;
      ++j;
    }
  }
  const double t = a.horizon();
  return {static_cast<double>(matches) / t,
          std::sqrt(static_cast<double>(matches)) / t, matches, matches == 0};
}

double cross_correlation(std::span<const double> path_a,
                         std::span<const double> path_b, double grid_dt,
                         double delay) {
  if (!(grid_dt > 0.0))
    throw DomainError("cross_correlation: grid_dt must be > 0");
  if (path_a.size() != path_b.size())
    throw UsageError("cross_correlation: paths must share a grid");
  const auto lag = static_cast<long long>(std::llround(delay / grid_dt));
  const auto n = static_cast<long long>(path_a.size());
  const long long overlap = n - std::llabs(lag);
  if (overlap < 10)
    throw UsageError("cross_correlation: overlap shorter than 10 samples");
  double sum = 0.0;
  if (lag >= 0) {
    for (long long i = 0; i < overlap; ++i)
      sum += path_a[static_cast<std::size_t>(i)] *
             path_b[static_cast<std::size_t>(i + lag)];
  } else {
    for (long long i = 0; i < overlap; ++i)
      sum += path_a[static_cast<std::size_t>(i - lag)] *
             path_b[static_cast<std::size_t>(i)];
  }
  return sum / static_cast<double>(overlap);
}

RateEstimate shuffled_coincidence_rate(const EventTrain& a,
                                       const EventTrain& b, double delay,
                                       double window, int n_surrogates,
                                       std::uint64_t seed) {
  if (n_surrogates < 1)
    throw UsageError("shuffled_coincidence_rate: need n_surrogates >= 1");
  if (a.horizon() != b.horizon())
    throw UsageError("shuffled_coincidence_rate: trains must share a horizon");
  const CounterRng rng(seed);
  const double horizon = b.horizon();
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t total_matches = 0;
  for (int s = 0; s < n_surrogates; ++s) {
    // shift by at least a fifth of the horizon so local structure decorrelates
    const double offset =
        horizon * (0.2 + 0.6 * rng.uniform(stream_id(0, 0), s));
    std::vector<double> shifted;
    shifted.reserve(b.size());
    for (double t : b.timestamps()) {
      double u = t + offset;
      if (u >= horizon)
        u -= horizon;
      shifted.push_back(u);
    }
    std::sort(shifted.begin(), shifted.end());
    shifted.erase(std::unique(shifted.begin(), shifted.end()), shifted.end());
    const auto est =
        coincidence_rate(a, EventTrain(std::move(shifted), horizon), delay,
                         window);
    sum += est.rate;
    sum_sq += est.rate * est.rate;
    total_matches += est.n_events;
  }
  const double k = n_surrogates;
  const double mean = sum / k;
  const double var = std::max(0.0, sum_sq / k - mean * mean);
  return {mean, n_surrogates > 1 ? std::sqrt(var / (k - 1.0)) : 0.0,
          total_matches, total_matches == 0};
}

} // namespace photocount
