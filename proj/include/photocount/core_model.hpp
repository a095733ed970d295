#pragma once
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "photocount/errors.hpp"

namespace photocount {

/// Physical identity of a threshold detector. A count fires when the energy
/// accumulated since the last reset first reaches threshold_energy; the
/// zeropoint background entering the detector is modelled as white noise of
/// scale noise_scale (units energy * sqrt(time)). Immutable after
/// construction.
class DetectorParams {
public:
  DetectorParams(double threshold_energy, double noise_scale,
                 double area = 1.0, double dead_time = 0.0);

  double threshold_energy() const { return threshold_energy_; }
  double noise_scale() const { return noise_scale_; }
  double area() const { return area_; }
  double dead_time() const { return dead_time_; }

private:
  double threshold_energy_;
  double noise_scale_;
  double area_;
  double dead_time_;
};

/// Constant signal intensity above the zeropoint background.
struct ConstantSignal {
  double intensity = 0.0;
};

/// Right-continuous step signal: levels[i] holds on [breakpoints[i-1],
/// breakpoints[i]), with levels.size() == breakpoints.size() + 1.
struct PiecewiseSignal {
  std::vector<double> breakpoints;
  std::vector<double> levels;
};

/// Pair of stationary, exponentially-correlated stochastic intensities with
/// common mean and relaxation time. cross_correlation in [-1, 1] couples the
/// two members' fluctuations; realized intensities are clamped at 0.
struct ModulatedPairSignal {
  double mean = 0.0;
  double relaxation_time = 1.0;
  double amplitude = 0.0;
  double cross_correlation = 0.0;
};

/// Deterministic or stochastic signal intensity as a function of time.
/// Validates its variant's invariants at construction; immutable afterwards.
class SignalModel {
public:
  using Variant =
      std::variant<ConstantSignal, PiecewiseSignal, ModulatedPairSignal>;

  SignalModel(ConstantSignal c);           // NOLINT(google-explicit-constructor)
  SignalModel(PiecewiseSignal p);          // NOLINT(google-explicit-constructor)
  SignalModel(ModulatedPairSignal m);      // NOLINT(google-explicit-constructor)

  static SignalModel constant(double intensity);
  static SignalModel piecewise(std::vector<double> breakpoints,
                               std::vector<double> levels);
  static SignalModel modulated_pair(double mean, double relaxation_time,
                                    double amplitude, double cross_correlation);

  const Variant& value() const { return value_; }
  bool is_stochastic() const;

  template <class T> const T* get_if() const {
    return std::get_if<T>(&value_);
  }

private:
  Variant value_;
};

/// Query point for the radiation spectrum: angular frequency, temperature
/// (k_B folded in, so it carries energy units) and whether the zeropoint term
/// is included.
class SpectrumQuery {
public:
  SpectrumQuery(double angular_frequency, double temperature, bool include_zpf);

  double angular_frequency() const { return angular_frequency_; }
  double temperature() const { return temperature_; }
  bool include_zpf() const { return include_zpf_; }

private:
  double angular_frequency_;
  double temperature_;
  bool include_zpf_;
};

/// Spectral energy density in natural units (hbar = c = k_B = 1):
/// w^2/pi^2 * [ w/(exp(w/T) - 1) + w/2 ], the second bracket term present
/// only when the query includes the zeropoint contribution. The thermal term
/// is exactly 0 at T = 0.
double planck_density(const SpectrumQuery& q);

/// Signal intensity at time t. Constant and piecewise variants are
/// deterministic and reject a supplied seed; the modulated pair requires one
/// and returns a reproducible realization of the requested member (0 or 1),
/// clamped at 0.
double signal_intensity(const SignalModel& m, double t,
                        std::optional<std::uint64_t> noise_seed = std::nullopt,
                        int member = 0);

/// Exact integral of a deterministic intensity over [t0, t1]. Stochastic
/// variants are rejected; integrate realized paths in the Monte Carlo module
/// instead.
double integrated_signal(const SignalModel& m, double t0, double t1);

/// Marches a modulated-pair realization along a uniform grid t_k = k * step
/// using exact transitions of the underlying exponentially-correlated
/// process, started from its stationary law. Value k of either member is a
/// pure function of (seed, k): paths are reproducible and members with
/// cross_correlation = 1 coincide sample by sample.
class PairPathGenerator {
public:
  PairPathGenerator(const ModulatedPairSignal& m, double step,
                    std::uint64_t seed);

  void advance();               // move from t_k to t_{k+1}
  double time() const { return static_cast<double>(index_) * step_; }
  std::uint64_t index() const { return index_; }
  double intensity(int member) const;  // clamped at 0
  double latent(int member) const;     // unclamped deviation from the mean

  /// Exact partial transition of length h from the current grid point,
  /// without advancing the generator. Gives the exact marginal at off-grid
  /// times; draws come from dedicated substreams keyed by the current index.
  double intensity_after(double h, int member) const;

private:
  std::pair<double, double> correlated_normals(std::uint64_t index) const;

  ModulatedPairSignal params_;
  double step_;
  double decay_;       // exp(-step / relaxation_time)
  double kick_;        // amplitude * sqrt(1 - decay^2)
  std::uint64_t index_ = 0;
  double x0_;
  double x1_;
  std::uint64_t seed_;
};

} // namespace photocount
