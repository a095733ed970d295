#include "photocount/core_model.hpp"

#include <algorithm>
#include <cmath>

#include "photocount/rng.hpp"

namespace photocount {

namespace {

constexpr double kPiSquared = 9.869604401089358;

// Stream tags for the pair process; disjoint from the detector-noise tags in
// montecarlo.hpp.
constexpr unsigned kTagPairDriver = 4;  // member-0 driving noise
constexpr unsigned kTagPairIndep = 5;   // member-1 independent component
constexpr unsigned kTagPairPartialDriver = 6;
constexpr unsigned kTagPairPartialIndep = 7;

void require_finite_nonnegative_levels(const std::vector<double>& levels) {
  for (double v : levels)
    if (!(v >= 0.0))
      throw DomainError("signal intensity levels must be >= 0");
}

} // namespace

DetectorParams::DetectorParams(double threshold_energy, double noise_scale,
                               double area, double dead_time)
    : threshold_energy_(threshold_energy), noise_scale_(noise_scale),
      area_(area), dead_time_(dead_time) {
  if (!(threshold_energy_ > 0.0))
    throw DomainError("DetectorParams: threshold_energy must be > 0");
  if (!(noise_scale_ > 0.0))
    throw DomainError("DetectorParams: noise_scale must be > 0");
  if (!(area_ > 0.0))
    throw DomainError("DetectorParams: area must be > 0");
  if (!(dead_time_ >= 0.0))
    throw DomainError("DetectorParams: dead_time must be >= 0");
}

SignalModel::SignalModel(ConstantSignal c) : value_(c) {
  if (!(c.intensity >= 0.0))
    throw DomainError("ConstantSignal: intensity must be >= 0");
}

SignalModel::SignalModel(PiecewiseSignal p) : value_(std::move(p)) {
  const auto& pw = std::get<PiecewiseSignal>(value_);
  if (pw.levels.size() != pw.breakpoints.size() + 1)
    throw DomainError("PiecewiseSignal: need exactly one more level than "
                      "breakpoints");
  require_finite_nonnegative_levels(pw.levels);
  for (std::size_t i = 0; i + 1 < pw.breakpoints.size(); ++i)
    if (!(pw.breakpoints[i] < pw.breakpoints[i + 1]))
      throw DomainError("PiecewiseSignal: breakpoints must be strictly "
                        "increasing");
}

SignalModel::SignalModel(ModulatedPairSignal m) : value_(m) {
  if (!(m.mean >= 0.0))
    throw DomainError("ModulatedPairSignal: mean must be >= 0");
  if (!(m.relaxation_time > 0.0))
    throw DomainError("ModulatedPairSignal: relaxation_time must be > 0");
  if (!(m.amplitude >= 0.0))
    throw DomainError("ModulatedPairSignal: amplitude must be >= 0");
  if (!(m.cross_correlation >= -1.0 && m.cross_correlation <= 1.0))
    throw DomainError("ModulatedPairSignal: cross_correlation must lie in "
                      "[-1, 1]");
}

SignalModel SignalModel::constant(double intensity) {
  return SignalModel(ConstantSignal{intensity});
}

SignalModel SignalModel::piecewise(std::vector<double> breakpoints,
                                   std::vector<double> levels) {
  return SignalModel(PiecewiseSignal{std::move(breakpoints), std::move(levels)});
}

SignalModel SignalModel::modulated_pair(double mean, double relaxation_time,
                                        double amplitude,
                                        double cross_correlation) {
  return SignalModel(
      ModulatedPairSignal{mean, relaxation_time, amplitude, cross_correlation});
}

bool SignalModel::is_stochastic() const {
  return std::holds_alternative<ModulatedPairSignal>(value_);
}

SpectrumQuery::SpectrumQuery(double angular_frequency, double temperature,
                             bool include_zpf)
    : angular_frequency_(angular_frequency), temperature_(temperature),
      include_zpf_(include_zpf) {
  if (!(angular_frequency_ > 0.0))
    throw DomainError("SpectrumQuery: angular_frequency must be > 0");
  if (!(temperature_ >= 0.0))
    throw DomainError("SpectrumQuery: temperature must be >= 0");
}

double planck_density(const SpectrumQuery& q) {
  const double w = q.angular_frequency();
  double occupation = 0.0;
  if (q.temperature() > 0.0)
    occupation = w / std::expm1(w / q.temperature());
  const double zpf = q.include_zpf() ? 0.5 * w : 0.0;
  return w * w / kPiSquared * (occupation + zpf);
}

double signal_intensity(const SignalModel& m, double t,
                        std::optional<std::uint64_t> noise_seed, int member) {
  if (!(t >= 0.0))
    throw DomainError("signal_intensity: t must be >= 0");
  if (member != 0 && member != 1)
    throw UsageError("signal_intensity: member must be 0 or 1");
  if (m.is_stochastic() != noise_seed.has_value())
    throw UsageError(m.is_stochastic()
                         ? "signal_intensity: modulated pair requires a seed"
                         : "signal_intensity: seed given for a deterministic "
                           "signal");

  if (const auto* c = m.get_if<ConstantSignal>())
    return c->intensity;

  if (const auto* p = m.get_if<PiecewiseSignal>()) {
    // right-continuous: at a breakpoint the new level already holds
    const auto it =
        std::upper_bound(p->breakpoints.begin(), p->breakpoints.end(), t);
    return p->levels[static_cast<std::size_t>(it - p->breakpoints.begin())];
  }

  const auto& pair = *m.get_if<ModulatedPairSignal>();
  // March the exact-transition recursion to the last grid point before t,
  // then take one exact partial step. The grid resolves the relaxation time.
  const double step = pair.relaxation_time / 256.0;
  PairPathGenerator gen(pair, step, *noise_seed);
  const auto k = static_cast<std::uint64_t>(t / step);
  for (std::uint64_t i = 0; i < k; ++i)
    gen.advance();
  const double h = t - gen.time();
  if (h <= 0.0)
    return gen.intensity(member);
  return gen.intensity_after(h, member);
}

double integrated_signal(const SignalModel& m, double t0, double t1) {
  if (!(t0 >= 0.0) || !(t1 >= t0))
    throw DomainError("integrated_signal: need 0 <= t0 <= t1");
  if (m.is_stochastic())
    throw UsageError("integrated_signal: stochastic signal; integrate "
                     "realized paths in the Monte Carlo module");

  if (const auto* c = m.get_if<ConstantSignal>())
    return c->intensity * (t1 - t0);

  const auto& p = *m.get_if<PiecewiseSignal>();
  double total = 0.0;
  double lo = t0;
  for (std::size_t i = 0; i <= p.breakpoints.size(); ++i) {
    const double hi = i < p.breakpoints.size() ? p.breakpoints[i] : t1;
    if (hi > lo)
      total += p.levels[i] * (std::min(hi, t1) - lo);
    lo = std::max(lo, hi);
    if (lo >= t1)
      break;
  }
  return total;
}

PairPathGenerator::PairPathGenerator(const ModulatedPairSignal& m, double step,
                                     std::uint64_t seed)
    : params_(m), step_(step), seed_(seed) {
  if (!(step > 0.0))
    throw DomainError("PairPathGenerator: step must be > 0");
  decay_ = std::exp(-step_ / params_.relaxation_time);
  kick_ = params_.amplitude * std::sqrt(1.0 - decay_ * decay_);
  // stationary start; index 0 addresses the initial draw, steps use k >= 1
  const auto [z0, z1] = correlated_normals(0);
  x0_ = params_.amplitude * z0;
  x1_ = params_.amplitude * z1;
}

std::pair<double, double>
PairPathGenerator::correlated_normals(std::uint64_t index) const {
  const CounterRng rng(seed_);
  const double zd = rng.normal(stream_id(0, kTagPairDriver), index);
  const double zi = rng.normal(stream_id(0, kTagPairIndep), index);
  const double rho = params_.cross_correlation;
  return {zd, rho * zd + std::sqrt(1.0 - rho * rho) * zi};
}

void PairPathGenerator::advance() {
  ++index_;
  const auto [z0, z1] = correlated_normals(index_);
  x0_ = decay_ * x0_ + kick_ * z0;
  x1_ = decay_ * x1_ + kick_ * z1;
}

double PairPathGenerator::intensity(int member) const {
  return std::max(0.0, params_.mean + latent(member));
}

double PairPathGenerator::latent(int member) const {
  return member == 0 ? x0_ : x1_;
}

double PairPathGenerator::intensity_after(double h, int member) const {
  const double decay = std::exp(-h / params_.relaxation_time);
  const double kick = params_.amplitude * std::sqrt(1.0 - decay * decay);
  const CounterRng rng(seed_);
  const double zd =
      rng.normal(stream_id(0, kTagPairPartialDriver), index_);
  const double zi =
      rng.normal(stream_id(0, kTagPairPartialIndep), index_);
  const double rho = params_.cross_correlation;
  const double z =
      member == 0 ? zd : rho * zd + std::sqrt(1.0 - rho * rho) * zi;
  return std::max(0.0, params_.mean + decay * latent(member) + kick * z);
}

} // namespace photocount
