#include "photocount/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "photocount/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace photocount {

namespace {

// Crossing check for one Euler step from e0 to e1 against barrier em. Returns
// the crossing offset within the step (in time units), or a negative value if
// the step did not cross. Direct crossings are located by linear
// interpolation; sub-threshold steps can still cross in between, with the
// Brownian-bridge probability exp(-2(em-e0)(em-e1)/(sigma^2 dt)), and are
// assigned the half-step offset.
struct StepOutcome {
  bool crossed;
  double offset;
};

inline StepOutcome advance_step(double& energy, double em, double drift,
                                double noise, double dt, double sqrt_dt,
                                const CounterRng& rng, std::uint64_t gauss_stream,
                                std::uint64_t bridge_stream,
                                std::uint64_t index) {
  const double e0 = energy;
  const double e1 =
      e0 + drift * dt + noise * sqrt_dt * rng.normal(gauss_stream, index);
  if (e1 >= em) {
    const double offset = dt * (em - e0) / (e1 - e0);
    energy = e1;
    return {true, offset};
  }
  energy = e1;
  const double log_p = -2.0 * (em - e0) * (em - e1) / (noise * noise * dt);
  // the uniform draw can never be below exp(-45); skip the block entirely
  if (log_p > -45.0 &&
      rng.uniform(bridge_stream, index) < std::exp(log_p))
    return {true, 0.5 * dt};
  return {false, 0.0};
}

double single_fpt(const FptLaw& law, const RunConfig& cfg,
                  const CounterRng& rng, std::uint64_t lane) {
  const double dt = cfg.step();
  const double sqrt_dt = std::sqrt(dt);
  const auto n_steps = static_cast<std::uint64_t>(
      std::ceil(cfg.horizon() / dt - 1e-9));
  const std::uint64_t gauss = stream_id(lane, kTagSampleGauss);
  const std::uint64_t bridge = stream_id(lane, kTagSampleBridge);
  double energy = 0.0;
  for (std::uint64_t k = 0; k < n_steps; ++k) {
    const auto out = advance_step(energy, law.threshold(), law.drift(),
                                  law.noise_scale(), dt, sqrt_dt, rng, gauss,
                                  bridge, k);
    if (out.crossed)
      return static_cast<double>(k) * dt + out.offset;
  }
  return std::numeric_limits<double>::infinity();
}

// Right-continuous intensity lookup shared by the detector loops.
class IntensityOnGrid {
public:
  IntensityOnGrid(const SignalModel& m, const RunConfig& cfg, int member)
      : model_(m) {
    if (const auto* pair = m.get_if<ModulatedPairSignal>()) {
      PairPathGenerator gen(*pair, cfg.step(), cfg.seed());
      const auto n = static_cast<std::size_t>(
                         std::ceil(cfg.horizon() / cfg.step() - 1e-9)) +
                     1;
      path_.reserve(n);
      path_.push_back(gen.intensity(member));
      for (std::size_t k = 1; k < n; ++k) {
        gen.advance();
        path_.push_back(gen.intensity(member));
      }
      step_ = cfg.step();
    }
  }

  double operator()(double t) const {
    if (!path_.empty()) {
      auto k = static_cast<std::size_t>(t / step_);
      if (k >= path_.size())
        k = path_.size() - 1;
      return path_[k];
    }
    if (const auto* c = model_.get_if<ConstantSignal>())
      return c->intensity;
    const auto* p = model_.get_if<PiecewiseSignal>();
    const auto it =
        std::upper_bound(p->breakpoints.begin(), p->breakpoints.end(), t);
    return p->levels[static_cast<std::size_t>(it - p->breakpoints.begin())];
  }

  const std::vector<double>& path() const { return path_; }

private:
  SignalModel model_;
  std::vector<double> path_;
  double step_ = 0.0;
};

// One detector pass: renewal chain of first-passage segments. Each inter-count
// segment runs on its own local step grid starting at the previous count, so
// a gap under a constant signal is exactly one sample of the law. Gap g draws
// from lane g of the detector's streams.
EventTrain run_detector(const IntensityOnGrid& intensity,
                        const DetectorParams& p, const RunConfig& cfg,
                        const CounterRng& rng, unsigned gauss_tag,
                        unsigned bridge_tag) {
  const double dt = cfg.step();
  const double sqrt_dt = std::sqrt(dt);
  const double em = p.threshold_energy();
  const double noise = p.area() * p.noise_scale();
  std::vector<double> events;
  double ready = 0.0;
  std::uint64_t gap = 0;
  while (ready < cfg.horizon()) {
    const std::uint64_t gauss = stream_id(gap, gauss_tag);
    const std::uint64_t bridge = stream_id(gap, bridge_tag);
    double energy = 0.0;
    double crossing = -1.0;
    for (std::uint64_t k = 0; ready + static_cast<double>(k) * dt
                              < cfg.horizon(); ++k) {
      const double t_step = ready + static_cast<double>(k) * dt;
      const double drift = p.area() * intensity(t_step);
      const auto out = advance_step(energy, em, drift, noise, dt, sqrt_dt,
                                    rng, gauss, bridge, k);
      if (out.crossed) {
        crossing = t_step + out.offset;
        break;
      }
    }
    if (crossing < 0.0 || crossing > cfg.horizon())
      break;
    events.push_back(crossing);
    ready = crossing + p.dead_time();
    ++gap;
  }
  return EventTrain(std::move(events), cfg.horizon());
}

} // namespace

RunConfig::RunConfig(std::uint64_t seed, double step, double horizon,
                     int path_stride)
    : seed_(seed), step_(step), horizon_(horizon), path_stride_(path_stride) {
  if (!(step_ > 0.0))
    throw DomainError("RunConfig: step must be > 0");
  if (!(horizon_ > 0.0))
    throw DomainError("RunConfig: horizon must be > 0");
  if (!(step_ <= horizon_ / 10.0))
    throw DomainError("RunConfig: step must be at most horizon/10");
  if (path_stride_ < 1)
    throw DomainError("RunConfig: path_stride must be >= 1");
}

EventTrain::EventTrain(std::vector<double> timestamps, double horizon)
    : timestamps_(std::move(timestamps)), horizon_(horizon) {
  if (!(horizon_ > 0.0))
    throw DomainError("EventTrain: horizon must be > 0");
  double last = 0.0;
  bool first = true;
  for (double t : timestamps_) {
    if (!(t >= 0.0) || t > horizon_)
      throw DomainError("EventTrain: timestamps must lie in [0, horizon]");
    if (!first && !(t > last))
      throw DomainError("EventTrain: timestamps must be strictly increasing");
    last = t;
    first = false;
  }
}

std::vector<double> EventTrain::gaps() const {
  std::vector<double> g;
  if (timestamps_.size() < 2)
    return g;
  g.reserve(timestamps_.size() - 1);
  for (std::size_t i = 1; i < timestamps_.size(); ++i)
    g.push_back(timestamps_[i] - timestamps_[i - 1]);
  return g;
}

int worker_count() {
#ifdef _OPENMP
  int max = omp_get_max_threads();
#else
  int max = 1;
#endif
  if (const char* cap = std::getenv("FPT_THREADS")) {
    const int requested = std::atoi(cap);
    if (requested >= 1)
      max = std::min(max, requested);
  }
  return max;
}

std::vector<double> sample_fpt_serial(const FptLaw& law, const RunConfig& cfg,
                                      std::size_t n) {
  if (n < 1)
    throw DomainError("sample_fpt: need n >= 1");
  const CounterRng rng(cfg.seed());
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i)
    samples[i] = single_fpt(law, cfg, rng, i);
  return samples;
}

std::vector<double> sample_fpt(const FptLaw& law, const RunConfig& cfg,
                               std::size_t n) {
  if (n < 1)
    throw DomainError("sample_fpt: need n >= 1");
  const CounterRng rng(cfg.seed());
  std::vector<double> samples(n);
  const int workers = worker_count();
#pragma omp parallel for schedule(static) num_threads(workers)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i)
    samples[static_cast<std::size_t>(i)] =
        single_fpt(law, cfg, rng, static_cast<std::uint64_t>(i));
  return samples;
}

EventTrain simulate_detector(const SignalModel& m, const DetectorParams& p,
                             const RunConfig& cfg) {
  const CounterRng rng(cfg.seed());
  const IntensityOnGrid intensity(m, cfg, 0);
  return run_detector(intensity, p, cfg, rng, kTagDetectorGauss,
                      kTagDetectorBridge);
}

CoincidenceRun simulate_coincidence(const SignalModel& m,
                                    const DetectorParams& p1,
                                    const DetectorParams& p2,
                                    const RunConfig& cfg, bool shared_noise) {
  const auto* pair = m.get_if<ModulatedPairSignal>();
  if (pair == nullptr)
    throw UsageError("simulate_coincidence: signal must be a modulated pair");

  const CounterRng rng(cfg.seed());
  IntensityOnGrid member0(m, cfg, 0);
  IntensityOnGrid member1(m, cfg, 1);

  const unsigned tags1[2] = {kTagDetectorGauss, kTagDetectorBridge};
  const unsigned tags2[2] = {shared_noise ? kTagDetectorGauss
                                          : kTagDetectorGauss + 2,
                             shared_noise ? kTagDetectorBridge
                                          : kTagDetectorBridge + 2};

  EventTrain first(std::vector<double>{}, cfg.horizon());
  EventTrain second(std::vector<double>{}, cfg.horizon());
#pragma omp parallel sections num_threads(std::min(worker_count(), 2))
  {
#pragma omp section
    first = run_detector(member0, p1, cfg, rng, tags1[0], tags1[1]);
#pragma omp section
    second = run_detector(member1, p2, cfg, rng, tags2[0], tags2[1]);
  }

  CoincidenceRun run{std::move(first), std::move(second), false, 0.0, {}, {}};

  // validity regime: correlation time at least the typical inter-count time
  if (pair->mean > 0.0) {
    const double typical =
        std::max(p1.threshold_energy() / (p1.area() * pair->mean),
                 p2.threshold_energy() / (p2.area() * pair->mean));
    run.validity_warning = pair->relaxation_time < typical;
  }

  const auto stride = static_cast<std::size_t>(cfg.path_stride());
  run.path_dt = cfg.step() * static_cast<double>(stride);
  for (std::size_t k = 0; k < member0.path().size(); k += stride) {
    run.intensity_first.push_back(member0.path()[k]);
    run.intensity_second.push_back(member1.path()[k]);
  }
  return run;
}

} // namespace photocount
