#include "photocount/analytic_fpt.hpp"

#include <cmath>

namespace photocount {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005;
constexpr double kInvSqrtPi = 0.5641895835477563;
} // namespace

FptLaw::FptLaw(double threshold, double drift, double noise_scale)
    : threshold_(threshold), drift_(drift), noise_scale_(noise_scale) {
  if (!(threshold_ > 0.0))
    throw DomainError("FptLaw: threshold must be > 0");
  if (!(noise_scale_ > 0.0))
    throw DomainError("FptLaw: noise_scale must be > 0");
  if (!(drift_ >= 0.0))
    throw DomainError("FptLaw: drift must be >= 0");
}

FptLaw law_for(const DetectorParams& p, double signal_intensity) {
  if (!(signal_intensity >= 0.0))
    throw DomainError("law_for: signal intensity must be >= 0");
  return FptLaw(p.threshold_energy(), p.area() * signal_intensity,
                p.area() * p.noise_scale());
}

double detail::erfcx(double x) {
  // Below the overflow knee the direct product is accurate; beyond it use the
  // asymptotic expansion 1/(x sqrt(pi)) * sum (-1)^k (2k-1)!!/(2x^2)^k, whose
  // truncation error at x >= 25 is far below 1e-13 relative.
  if (x < 25.0)
    return std::exp(x * x) * std::erfc(x);
  const double r = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) * r;
    sum += term;
  }
  return kInvSqrtPi / x * sum;
}

double transition_density(const FptLaw& law, double energy, double t) {
  if (!(t > 0.0))
    throw DomainError("transition_density: t must be > 0");
  if (!(energy <= law.threshold()))
    throw DomainError("transition_density: E must not exceed the barrier");
  const double sigma2t = law.noise_scale() * law.noise_scale() * t;
  const double free_dev = energy - law.drift() * t;
  // difference of the two exponentials, written so the image cancellation at
  // the barrier is exact and the bracket is non-negative by construction
  const double bracket =
      -std::expm1(-2.0 * law.threshold() * (law.threshold() - energy) /
                  sigma2t);
  return std::exp(-free_dev * free_dev / (2.0 * sigma2t)) /
         (law.noise_scale() * kSqrt2Pi * std::sqrt(t)) * bracket;
}

double cdf(const FptLaw& law, double t) {
  if (!(t >= 0.0))
    throw DomainError("cdf: t must be >= 0");
  if (t == 0.0)
    return 0.0;
  const double denom = law.noise_scale() * std::sqrt(2.0 * t);
  const double z_minus = (law.threshold() - law.drift() * t) / denom;
  if (law.drift() == 0.0)
    return std::erfc(z_minus); // the two closed-form terms coincide
  const double z_plus = (law.threshold() + law.drift() * t) / denom;
  // exp(2*Em*Is/s^2) * erfc(z_plus) == erfcx(z_plus) * exp(-z_minus^2): the
  // huge exponential never appears on its own
  return 0.5 * (std::erfc(z_minus) +
                detail::erfcx(z_plus) * std::exp(-z_minus * z_minus));
}

double pdf(const FptLaw& law, double t) {
  if (!(t > 0.0))
    throw DomainError("pdf: t must be > 0");
  const double sigma2t = law.noise_scale() * law.noise_scale() * t;
  const double dev = law.threshold() - law.drift() * t;
  return law.threshold() /
         (law.noise_scale() * kSqrt2Pi * std::sqrt(t * t * t)) *
         std::exp(-dev * dev / (2.0 * sigma2t));
}

double mean_fpt(const FptLaw& law) {
  if (law.drift() == 0.0)
    throw InfiniteMeanError();
  return law.threshold() / law.drift();
}

double rate(const FptLaw& law) {
  return law.drift() / law.threshold();
}

double median_fpt(const FptLaw& law) {
  // bracket: start from the characteristic drift and diffusion times and
  // double until the cdf exceeds 1/2
  const double diffusive =
      law.threshold() * law.threshold() /
      (law.noise_scale() * law.noise_scale());
  double hi = diffusive;
  if (law.drift() > 0.0)
    hi = std::min(hi, 2.0 * law.threshold() / law.drift());
  while (cdf(law, hi) < 0.5)
    hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(law, mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace photocount
