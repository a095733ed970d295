#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include <boost/math/distributions/inverse_gaussian.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "photocount/analytic_fpt.hpp"

using namespace photocount;
using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr double kInf = std::numeric_limits<double>::infinity();

TEST_CASE("transition density reference values") {
  const FptLaw drifted(1.0, 1.0, 1.0);
  // exact image cancellation at the barrier
  CHECK(transition_density(drifted, 1.0, 0.7) == 0.0);
  for (double t : {0.01, 0.5, 3.0, 40.0})
    CHECK(transition_density(drifted, 1.0, t) == 0.0);

  // zero-drift value (1 - e^-2)/sqrt(2 pi), frozen from a high-precision
  // evaluation; also reproduced by the naive two-exponential route below
  const FptLaw driftless(1.0, 0.0, 1.0);
  const double expected = 0.3449513138882446;
  CHECK(transition_density(driftless, 0.0, 1.0) ==
        doctest::Approx(expected).epsilon(1e-13));

  // mass concentrates near E = Is*t at small times: the far tail is tiny
  CHECK(transition_density(drifted, -3.0, 0.01) < 1e-190);
}

TEST_CASE("transition density equals the naive two-exponential form") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> unit(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const FptLaw law(unit(gen), unit(gen) - 0.1, unit(gen));
    const double t = unit(gen);
    const double e = law.threshold() - unit(gen);
    const double s2t = law.noise_scale() * law.noise_scale() * t;
    const double direct =
        (std::exp(-(e - law.drift() * t) * (e - law.drift() * t) /
                  (2.0 * s2t)) -
         std::exp(2.0 * law.threshold() * law.drift() /
                      (law.noise_scale() * law.noise_scale()) -
                  (e - law.drift() * t - 2.0 * law.threshold()) *
                      (e - law.drift() * t - 2.0 * law.threshold()) /
                      (2.0 * s2t))) /
        (law.noise_scale() * std::sqrt(2.0 * M_PI * t));
    CHECK(transition_density(law, e, t) ==
          doctest::Approx(direct).epsilon(1e-10));
    CHECK(transition_density(law, e, t) >= 0.0);
  }
}

TEST_CASE("transition density domain errors") {
  const FptLaw law(1.0, 1.0, 1.0);
  CHECK_THROWS_AS(transition_density(law, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(transition_density(law, 0.0, -1.0), DomainError);
  CHECK_THROWS_AS(transition_density(law, 1.1, 1.0), DomainError);
}

TEST_CASE("cdf reference values") {
  const FptLaw driftless(1.0, 0.0, 1.0);
  CHECK(cdf(driftless, 0.5) ==
        doctest::Approx(0.15729920705028513).epsilon(1e-14)); // erfc(1)
  CHECK(cdf(driftless, 0.0) == 0.0);
  CHECK(cdf(FptLaw(2.0, 0.3, 0.7), 0.0) == 0.0);
  CHECK(cdf(FptLaw(1.0, 1.0, 1.0), 1e6) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(cdf(driftless, -0.1), DomainError);
}

TEST_CASE("cdf is stable for huge drift-to-noise ratios") {
  // 2*Em*Is/sigma^2 = 2e8: the naive product overflows, the scaled form must
  // stay in [0, 1] and hit the deterministic limit
  const FptLaw stiff(1.0, 1.0, 1e-4);
  for (double t : {0.5, 0.9, 0.999, 1.001, 1.5, 10.0}) {
    const double p = cdf(stiff, t);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
  CHECK(cdf(stiff, 0.9) < 1e-12);
  CHECK(cdf(stiff, 1.1) > 1.0 - 1e-12);
}

TEST_CASE("zero-drift cdf reduces to the single erfc term exactly") {
  for (double em : {0.5, 1.0, 2.0})
    for (double sigma : {0.3, 1.0, 4.0})
      for (double t : {0.01, 0.7, 5.0, 80.0}) {
        const FptLaw law(em, 0.0, sigma);
        CHECK(cdf(law, t) == std::erfc(em / (sigma * std::sqrt(2.0 * t))));
      }
}

TEST_CASE("cdf matches an independent inverse-Gaussian oracle") {
  for (const auto& [em, is, sigma] :
       {std::array{1.0, 1.0, 1.0}, std::array{2.0, 1.0, 0.5},
        std::array{1.0, 3.0, 2.0}}) {
    const FptLaw law(em, is, sigma);
    const boost::math::inverse_gaussian_distribution<double> ig(
        em / is, em * em / (sigma * sigma));
    for (double t : {0.2, 0.5, 1.0, 2.0, 7.0}) {
      CHECK(cdf(law, t) ==
            doctest::Approx(boost::math::cdf(ig, t)).epsilon(1e-11));
      CHECK(pdf(law, t) ==
            doctest::Approx(boost::math::pdf(ig, t)).epsilon(1e-11));
    }
  }
}

TEST_CASE("pdf reference values") {
  CHECK(pdf(FptLaw(1.0, 1.0, 1.0), 1.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-14));
  // exponent vanishes at t = Em/Is: Em/(sigma sqrt(2 pi t^3)) = 1/(2 sqrt(pi))
  CHECK(pdf(FptLaw(2.0, 1.0, 1.0), 2.0) ==
        doctest::Approx(0.28209479177387814).epsilon(1e-14));
  CHECK_THROWS_AS(pdf(FptLaw(1, 1, 1), 0.0), DomainError);
  CHECK_THROWS_AS(pdf(FptLaw(1, 1, 1), -2.0), DomainError);
}

TEST_CASE("pdf integrates to one") {
  const FptLaw law(1.0, 1.0, 1.0);
  const double total = Quad::integrate(
      [&](double t) { return pdf(law, t); }, 0.0, kInf, 12, 1e-11);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("pdf is the derivative of the cdf") {
  std::mt19937 gen(22);
  std::uniform_real_distribution<double> unit(0.2, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const FptLaw law(unit(gen), unit(gen), unit(gen));
    for (double t : {0.01, 0.1, 1.0, 10.0, 100.0}) {
      const double h = 1e-6 * t;
      const double fd = (cdf(law, t + h) - cdf(law, t - h)) / (2.0 * h);
      const double f = pdf(law, t);
      if (f > 1e-300)
        CHECK(fd == doctest::Approx(f).epsilon(1e-4));
    }
  }
}

TEST_CASE("normalization couples density mass and cdf") {
  for (const auto& [em, is, sigma] :
       {std::array{1.0, 1.0, 1.0}, std::array{1.0, 0.0, 1.0},
        std::array{2.0, 1.0, 0.5}}) {
    const FptLaw law(em, is, sigma);
    for (double t : {0.3, 1.0, 4.0}) {
      const double mass = Quad::integrate(
          [&](double e) { return transition_density(law, e, t); }, -kInf, em,
          12, 1e-11);
      CHECK(mass + cdf(law, t) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
}

TEST_CASE("mean, rate, and their coupling") {
  CHECK(mean_fpt(FptLaw(2.0, 0.5, 1.0)) == 4.0);
  CHECK(mean_fpt(FptLaw(1.0, 1.0, 7.0)) == 1.0); // independent of noise
  CHECK_THROWS_AS(mean_fpt(FptLaw(1.0, 0.0, 1.0)), InfiniteMeanError);

  CHECK(rate(FptLaw(1.5, 3.0, 0.2)) == 2.0);
  CHECK(rate(FptLaw(1.0, 0.0, 1.0)) == 0.0);
  for (double sigma : {0.1, 1.0, 10.0})
    CHECK(rate(FptLaw(1.0, 1.0, sigma)) == 1.0);

  std::mt19937 gen(33);
  std::uniform_real_distribution<double> unit(0.05, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const FptLaw law(unit(gen), unit(gen), unit(gen));
    CHECK(rate(law) * mean_fpt(law) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("median reference values") {
  // zero drift: solve erfc(1/sqrt(2 t)) = 1/2; closed form from the
  // independent erfc-inverse oracle
  const double oracle =
      1.0 / (2.0 * boost::math::erfc_inv(0.5) * boost::math::erfc_inv(0.5));
  CHECK(oracle == doctest::Approx(2.1981093383177324).epsilon(1e-12));
  CHECK(median_fpt(FptLaw(1.0, 0.0, 1.0)) ==
        doctest::Approx(oracle).epsilon(1e-10));

  // vanishing noise: deterministic passage at Em/Is
  CHECK(median_fpt(FptLaw(1.0, 1.0, 1e-4)) == doctest::Approx(1.0).epsilon(1e-3));

  // larger threshold, later passage
  CHECK(median_fpt(FptLaw(2.0, 1.0, 1.0)) > median_fpt(FptLaw(1.0, 1.0, 1.0)));
}

TEST_CASE("median solves cdf = 1/2 across random laws") {
  std::mt19937 gen(44);
  std::uniform_real_distribution<double> unit(0.05, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const FptLaw law(unit(gen), trial % 3 == 0 ? 0.0 : unit(gen), unit(gen));
    const double med = median_fpt(law);
    CHECK(cdf(law, med) == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("time rescaling maps laws covariantly") {
  // t -> lambda t sends (Em, Is, sigma) to (Em, lambda Is, sigma sqrt(lambda))
  const double lambda = 2.0;
  std::mt19937 gen(55);
  std::uniform_real_distribution<double> unit(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double em = unit(gen);
    const double is = trial % 4 == 0 ? 0.0 : unit(gen);
    const double sigma = unit(gen);
    const FptLaw law(em, is, sigma);
    const FptLaw scaled(em, lambda * is, sigma * std::sqrt(lambda));
    for (double t : {0.3, 1.0, 2.5}) {
      CHECK(cdf(scaled, t) == doctest::Approx(cdf(law, lambda * t))
                                  .epsilon(1e-12));
    }
  }
}

TEST_CASE("cdf is non-decreasing") {
  const FptLaw law(1.3, 0.8, 1.7);
  double prev = 0.0;
  for (double t = 0.05; t < 20.0; t += 0.05) {
    const double p = cdf(law, t);
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("erfcx agrees with the direct product and its asymptotics") {
  for (double x : {0.0, 0.5, 3.0, 10.0, 24.9})
    CHECK(detail::erfcx(x) ==
          doctest::Approx(std::exp(x * x) * std::erfc(x)).epsilon(1e-12));
  // continuity across the asymptotic switch
  CHECK(detail::erfcx(25.0 + 1e-9) ==
        doctest::Approx(detail::erfcx(25.0 - 1e-9)).epsilon(1e-10));
  // large-x limit ~ 1/(x sqrt(pi))
  CHECK(detail::erfcx(1e4) * 1e4 * std::sqrt(M_PI) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("law invariants") {
  CHECK_THROWS_AS(FptLaw(0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(FptLaw(1.0, -0.5, 1.0), DomainError);
  CHECK_THROWS_AS(FptLaw(1.0, 1.0, 0.0), DomainError);
}

TEST_CASE("area scaling folds into the law") {
  const DetectorParams det(2.0, 0.5, 3.0);
  const FptLaw law = law_for(det, 1.5);
  CHECK(law.threshold() == 2.0);
  CHECK(law.drift() == 4.5);
  CHECK(law.noise_scale() == 1.5);
}
