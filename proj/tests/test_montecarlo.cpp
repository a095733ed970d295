#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "photocount/montecarlo.hpp"
#include "photocount/stats.hpp"

using namespace photocount;

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v)
    s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

} // namespace

TEST_CASE("run config invariants") {
  CHECK_THROWS_AS(RunConfig(1, 0.0, 10.0), DomainError);
  CHECK_THROWS_AS(RunConfig(1, 1e-3, 0.0), DomainError);
  CHECK_THROWS_AS(RunConfig(1, 2.0, 10.0), DomainError); // step > horizon/10
  CHECK_THROWS_AS(RunConfig(1, 1e-3, 10.0, 0), DomainError);
}

TEST_CASE("event train invariants") {
  CHECK_THROWS_AS(EventTrain({1.0, 1.0}, 10.0), DomainError);
  CHECK_THROWS_AS(EventTrain({2.0, 1.0}, 10.0), DomainError);
  CHECK_THROWS_AS(EventTrain({-1.0}, 10.0), DomainError);
  CHECK_THROWS_AS(EventTrain({11.0}, 10.0), DomainError);
  const EventTrain train({1.0, 2.5, 4.0}, 10.0);
  CHECK(train.gaps() == std::vector<double>{1.5, 1.5});
}

TEST_CASE("noiseless limit crosses deterministically at Em/Is") {
  const FptLaw law(1.0, 1.0, 1e-6);
  const RunConfig cfg(7, 1e-3, 100.0);
  for (double t : sample_fpt(law, cfg, 64))
    CHECK(t == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("parallel sampler reproduces the serial reference bit for bit") {
  const FptLaw law(1.0, 1.0, 1.0);
  const RunConfig cfg(99, 1e-3, 200.0);
  const auto serial = sample_fpt_serial(law, cfg, 2000);
  const auto parallel = sample_fpt(law, cfg, 2000);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i)
    CHECK(serial[i] == parallel[i]);

#ifdef _OPENMP
  // worker count must not matter
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = sample_fpt(law, cfg, 500);
  omp_set_num_threads(saved);
  const auto many = sample_fpt(law, cfg, 500);
  for (std::size_t i = 0; i < one.size(); ++i)
    CHECK(one[i] == many[i]);
#endif
}

TEST_CASE("sample mean and variance match the law's moments") {
  const FptLaw law(1.0, 1.0, 1.0);
  const RunConfig cfg(1234, 1e-3, 200.0);
  const auto samples = sample_fpt(law, cfg, 100000);
  // inverse-Gaussian mean Em/Is and variance Em sigma^2 / Is^3
  CHECK(mean_of(samples) > 0.99);
  CHECK(mean_of(samples) < 1.01);
  CHECK(variance_of(samples) > 0.97);
  CHECK(variance_of(samples) < 1.03);
}

TEST_CASE("halving the step moves the mean by less than two standard errors") {
  const FptLaw law(1.0, 1.0, 1.0);
  const std::size_t n = 20000;
  const auto coarse = sample_fpt(law, RunConfig(5, 2e-3, 200.0), n);
  const auto fine = sample_fpt(law, RunConfig(5, 1e-3, 200.0), n);
  const double se = std::sqrt(variance_of(coarse) / static_cast<double>(n));
  CHECK(std::fabs(mean_of(coarse) - mean_of(fine)) < 2.0 * se);
}

TEST_CASE("sampled first-passage times follow the analytic law") {
  const FptLaw law(1.0, 1.0, 1.0);
  auto samples = sample_fpt(law, RunConfig(17, 1e-3, 200.0), 10000);
  std::sort(samples.begin(), samples.end());
  const double d = ks_statistic(samples, [&](double t) { return cdf(law, t); });
  CHECK(d < 1.63 / std::sqrt(10000.0));
}

TEST_CASE("deterministic counting at rate Is/Em") {
  const DetectorParams det(1.0, 1e-6);
  const RunConfig cfg(3, 1e-3, 100.0);
  const auto train = simulate_detector(SignalModel::constant(2.0), det, cfg);
  // the 200th crossing sits on the horizon boundary within noise
  CHECK(train.size() >= 199);
  CHECK(train.size() <= 200);
  for (double gap : train.gaps())
    CHECK(std::fabs(gap - 0.5) < 1e-3);
}

TEST_CASE("zero signal yields a vanishing empirical rate") {
  const DetectorParams det(1.0, 1.0);
  const auto zero = SignalModel::constant(0.0);
  double prev_rate = 1e9;
  for (double horizon : {100.0, 1000.0, 10000.0}) {
    const auto train =
        simulate_detector(zero, det, RunConfig(21, 1e-3, horizon));
    const double r = empirical_rate(train).rate;
    CHECK(r < prev_rate);
    prev_rate = r;
  }
  CHECK(prev_rate < 0.05);
}

TEST_CASE("piecewise signal: counts track the integrated intensity") {
  const DetectorParams det(1.0, 0.1);
  const auto signal = SignalModel::piecewise({50.0}, {1.0, 3.0});
  const auto train =
      simulate_detector(signal, det, RunConfig(8, 1e-3, 100.0));
  std::size_t low = 0;
  for (double t : train.timestamps())
    if (t <= 50.0)
      ++low;
  const auto high = train.size() - low;
  CHECK(std::fabs(static_cast<double>(low) - 50.0) <= 5.0);
  CHECK(std::fabs(static_cast<double>(high) - 150.0) <= 15.0);
}

TEST_CASE("detector gaps are i.i.d. samples of the law") {
  const DetectorParams det(1.0, 1.0);
  const FptLaw law(1.0, 2.0, 1.0);
  const auto train = simulate_detector(SignalModel::constant(2.0), det,
                                       RunConfig(31, 1e-3, 3000.0));
  auto gaps = train.gaps();
  REQUIRE(gaps.size() > 3000);
  std::sort(gaps.begin(), gaps.end());
  const double d = ks_statistic(gaps, [&](double t) { return cdf(law, t); });
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(gaps.size())));
}

TEST_CASE("constant-signal rate recovers Is/Em") {
  const DetectorParams det(1.0, 1.0);
  const auto train = simulate_detector(SignalModel::constant(2.0), det,
                                       RunConfig(77, 1e-3, 10000.0));
  const auto est = empirical_rate(train);
  CHECK(std::fabs(est.rate - 2.0) < 3.0 * est.std_error);
}

TEST_CASE("dead time is honored and pauses the accumulator") {
  const DetectorParams det(1.0, 1.0, 1.0, 0.3);
  const auto train = simulate_detector(SignalModel::constant(2.0), det,
                                       RunConfig(13, 1e-3, 500.0));
  for (double gap : train.gaps())
    CHECK(gap >= 0.3);
  // with dead time the rate drops to 1/(dead + Em/Is) up to noise
  const auto est = empirical_rate(train);
  CHECK(std::fabs(est.rate - 1.0 / 0.8) < 4.0 * est.std_error);
}

TEST_CASE("modulated-pair signal drives a single detector") {
  const DetectorParams det(1.0, 1.0);
  const auto signal = SignalModel::modulated_pair(1.0, 10.0, 0.3, 0.5);
  const auto train = simulate_detector(signal, det, RunConfig(3, 1e-3, 500.0));
  CHECK(train.size() > 300); // roughly mean/Em counts per unit time
  const auto est = empirical_rate(train);
  CHECK(std::fabs(est.rate - 1.0) < 6.0 * est.std_error);
}

TEST_CASE("coincidence requires the pair variant") {
  const DetectorParams det(1.0, 1.0);
  CHECK_THROWS_AS(simulate_coincidence(SignalModel::constant(1.0), det, det,
                                       RunConfig(1, 1e-3, 100.0)),
                  UsageError);
}

TEST_CASE("fully shared randomness gives identical trains") {
  const DetectorParams det(1.0, 1.0);
  const auto signal = SignalModel::modulated_pair(1.0, 10.0, 0.3, 1.0);
  const auto run = simulate_coincidence(signal, det, det,
                                        RunConfig(5, 1e-3, 300.0),
                                        /*shared_noise=*/true);
  REQUIRE(run.first.size() == run.second.size());
  for (std::size_t i = 0; i < run.first.size(); ++i)
    CHECK(run.first.timestamps()[i] == run.second.timestamps()[i]);
  // and the recorded member paths coincide as well
  for (std::size_t k = 0; k < run.intensity_first.size(); ++k)
    CHECK(run.intensity_first[k] == run.intensity_second[k]);
}

TEST_CASE("independent members coincide only at the accidental level") {
  const DetectorParams det(1.0, 1.0);
  const auto signal = SignalModel::modulated_pair(1.0, 10.0, 0.5, 0.0);
  const RunConfig cfg(11, 1e-3, 2000.0, 10);
  const auto run = simulate_coincidence(signal, det, det, cfg);
  CHECK_FALSE(run.validity_warning);
  const double window = 0.1;
  const auto observed = coincidence_rate(run.first, run.second, 0.0, window);
  const double r1 = empirical_rate(run.first).rate;
  const double r2 = empirical_rate(run.second).rate;
  // accidental level r1*r2*window within 10%
  CHECK(observed.rate == doctest::Approx(r1 * r2 * window).epsilon(0.10));
}

TEST_CASE("correlated members produce excess coincidences") {
  const DetectorParams det(1.0, 1.0);
  const auto signal = SignalModel::modulated_pair(1.0, 10.0, 0.5, 0.8);
  const RunConfig cfg(19, 1e-3, 2000.0, 10);
  const auto run = simulate_coincidence(signal, det, det, cfg);
  const double window = 0.1;
  const auto observed = coincidence_rate(run.first, run.second, 0.0, window);
  const auto baseline = shuffled_coincidence_rate(run.first, run.second, 0.0,
                                                  window, 10, 20);
  const double expected =
      cross_correlation(run.intensity_first, run.intensity_second,
                        run.path_dt, 0.0) /
      (mean_of(run.intensity_first) * mean_of(run.intensity_second));
  CHECK(observed.rate / baseline.rate ==
        doctest::Approx(expected).epsilon(0.18));
}

TEST_CASE("validity warning fires when the correlation time is too short") {
  const DetectorParams det(1.0, 1.0);
  const auto signal = SignalModel::modulated_pair(1.0, 0.05, 0.3, 0.5);
  const auto run =
      simulate_coincidence(signal, det, det, RunConfig(23, 1e-3, 100.0));
  CHECK(run.validity_warning);
}

TEST_CASE("recorded paths honor the stride") {
  const DetectorParams det(1.0, 1.0);
  const auto signal = SignalModel::modulated_pair(1.0, 10.0, 0.3, 0.5);
  const RunConfig cfg(29, 1e-2, 100.0, 5);
  const auto run = simulate_coincidence(signal, det, det, cfg);
  CHECK(run.path_dt == doctest::Approx(0.05));
  CHECK(run.intensity_first.size() ==
        run.intensity_second.size());
  CHECK(run.intensity_first.size() >= 100.0 / 0.05 / 1.01);
}
