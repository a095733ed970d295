#pragma once
#include <cstdint>
#include <vector>

#include "photocount/analytic_fpt.hpp"
#include "photocount/core_model.hpp"
#include "photocount/errors.hpp"

namespace photocount {

// Stream-tag table for counter-based draws. Tags keep every consumer of the
// master seed on a provably disjoint set of Philox counters.
//   0/1  detector 0: step gaussian / bridge uniform
//   2/3  detector 1: step gaussian / bridge uniform
//   4..7 modulated-pair path draws (see core_model.cpp)
//   8/9  sample_fpt: step gaussian / bridge uniform
inline constexpr unsigned kTagDetectorGauss = 0;
inline constexpr unsigned kTagDetectorBridge = 1;
inline constexpr unsigned kTagSampleGauss = 8;
inline constexpr unsigned kTagSampleBridge = 9;

/// Discretization and reproducibility parameters for a stochastic run.
class RunConfig {
public:
  RunConfig(std::uint64_t seed, double step, double horizon,
            int path_stride = 1);

  std::uint64_t seed() const { return seed_; }
  double step() const { return step_; }
  double horizon() const { return horizon_; }
  /// Every path_stride-th grid point of a pair run's intensity paths is
  /// recorded for the correlation estimators.
  int path_stride() const { return path_stride_; }

private:
  std::uint64_t seed_;
  double step_;
  double horizon_;
  int path_stride_;
};

/// Strictly increasing detection timestamps inside [0, horizon].
class EventTrain {
public:
  EventTrain(std::vector<double> timestamps, double horizon);

  const std::vector<double>& timestamps() const { return timestamps_; }
  double horizon() const { return horizon_; }
  std::size_t size() const { return timestamps_.size(); }
  bool empty() const { return timestamps_.empty(); }

  /// Intervals between consecutive events (size() - 1 values).
  std::vector<double> gaps() const;

private:
  std::vector<double> timestamps_;
  double horizon_;
};

/// Euler-Maruyama first-passage sampling of the accumulated-energy process,
/// with the within-step Brownian-bridge crossing correction. Sample i is a
/// pure function of (seed, i, step); results are bit-identical for any worker
/// count. Trajectories still below the barrier at the horizon yield +infinity.
/// Parallelized over trajectories (OpenMP); honors the FPT_THREADS cap.
std::vector<double> sample_fpt(const FptLaw& law, const RunConfig& cfg,
                               std::size_t n);

/// Single-threaded reference implementation of sample_fpt, kept for testing
/// the parallel kernel against. Same outputs, bit for bit.
std::vector<double> sample_fpt_serial(const FptLaw& law, const RunConfig& cfg,
                                      std::size_t n);

/// Full detector run under a signal model: accumulate A*I(t) dt plus
/// A-scaled zeropoint noise from the last reset, emit a count at each barrier
/// crossing, reset the accumulator, sit out the dead time, stop at the
/// horizon. A modulated-pair signal is realized from cfg.seed (member 0).
EventTrain simulate_detector(const SignalModel& m, const DetectorParams& p,
                             const RunConfig& cfg);

/// Two correlated detectors fed by one shared pair realization.
struct CoincidenceRun {
  EventTrain first;
  EventTrain second;
  /// Set when the signal's relaxation time is shorter than the typical
  /// inter-count interval, outside the regime the rate law was derived for.
  bool validity_warning = false;
  double path_dt = 0.0; // spacing of the recorded path samples
  std::vector<double> intensity_first;
  std::vector<double> intensity_second;
};

/// Generates one shared pair of correlated intensity paths and feeds each
/// member to an independent detector simulation with its own zeropoint noise
/// stream. `shared_noise` forces both detectors onto the same noise stream
/// (a determinism check knob, not a physical setting).
CoincidenceRun simulate_coincidence(const SignalModel& m,
                                    const DetectorParams& p1,
                                    const DetectorParams& p2,
                                    const RunConfig& cfg,
                                    bool shared_noise = false);

/// Worker count for the parallel kernels: the FPT_THREADS environment
/// variable when set, otherwise the OpenMP default.
int worker_count();

} // namespace photocount
