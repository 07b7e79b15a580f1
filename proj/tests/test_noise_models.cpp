#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "ratbounds/beliefs.hpp"
#include "ratbounds/noise_models.hpp"
#include "ratbounds/special_functions.hpp"

using namespace ratbounds;
using doctest::Approx;

TEST_SUITE("noise_models") {

TEST_CASE("construction and parsing") {
  CHECK(NoiseFamily::parse("laplace", 2.0).kind() == Family::Laplace);
  CHECK(NoiseFamily::parse("logistic").name() == "logistic");
  CHECK_THROWS_AS(NoiseFamily::parse("cauchy"), std::invalid_argument);
  CHECK_THROWS_AS(NoiseFamily(Family::Gaussian, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(NoiseFamily(Family::Laplace, -1.0), std::invalid_argument);
}

TEST_CASE("densities are symmetric, log-concave and normalised") {
  for (const auto& f : {NoiseFamily::gaussian(1.5), NoiseFamily::laplace(0.7), NoiseFamily::logistic(2.0)}) {
    CHECK(f.log_concave_on_grid());
    for (double x = -15.0; x <= 15.0; x += 0.29) {
      CHECK(f.pdf(x) > 0.0);
      CHECK(f.pdf(x) == Approx(f.pdf(-x)).epsilon(1e-14));
      CHECK(std::fabs(f.cdf(x) + f.cdf(-x) - 1.0) < 1e-12);
      CHECK(f.log_pdf(x) == Approx(std::log(f.pdf(x))).epsilon(1e-13));
      // right of ~2 scales the cdf sits too close to 1 to invert
      if (x <= 2.0 * f.scale()) {
        CHECK(f.quantile(f.cdf(x)) == Approx(x).epsilon(1e-9));
        CHECK(f.quantile_from_log(f.log_cdf(x)) == Approx(x).epsilon(1e-9));
      }
    }
    auto pdf = [&](double x) { return f.pdf(x); };
    const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(pdf, -INFINITY, INFINITY, 15, 1e-14);
    CHECK(mass == Approx(1.0).epsilon(1e-10));
    CHECK(f.log_cdf(-1e4 * f.scale()) < -100.0);
  }
}

TEST_CASE("eta") {
  CHECK(NoiseFamily::laplace().eta() == 1.0);
  CHECK(NoiseFamily::gaussian().eta() == 0.0);
  const auto lg = NoiseFamily::logistic(2.0);
  CHECK(lg.eta() == Approx(2.0).epsilon(1e-12));
  // F/f plateaus at eta far in the left tail
  CHECK(std::fabs(lg.tail_ratio(-100.0) - 2.0) < 1e-8);
}

TEST_CASE("delta and varsigma") {
  const auto g = NoiseFamily::gaussian();
  const auto lap = NoiseFamily::laplace();
  const auto lg = NoiseFamily::logistic(2.0);
  CHECK(std::fabs(g.delta(0.0) - 0.79788456080286536) < 1e-10);
  CHECK(std::fabs(g.varsigma(0.0) - 0.79788456080286536) < 1e-10);
  CHECK(std::fabs(lap.delta(-20.0) - 1.0) < 1e-6);
  CHECK(std::fabs(lap.varsigma(20.0) - 1.0) < 1e-6);
  CHECK(std::fabs(lap.delta(-3.0) - 1.0) < 1e-12);
  CHECK(lap.delta(0.7) == Approx(1.2615184011266767).epsilon(1e-10));
  CHECK(lg.delta(1.5) == Approx(3.3477816883692086).epsilon(1e-10));
  for (const auto& f : {g, lap, lg}) {
    CHECK(f.delta(50.0) > 40.0);
    for (double u = -5.0; u <= 5.0; u += 0.25) CHECK(std::fabs(f.varsigma(u) - f.delta(-u)) < 1e-10);
    for (double u = -50.0; u <= 50.0; u += 1.0) {
      const double d = f.delta(u);
      CHECK(d > 0.0);
      CHECK(d - std::max(u, 0.0) < 10.0 * f.scale());
    }
  }
}

TEST_CASE("gaussian delta reproduces the effort posterior mean") {
  const auto g = NoiseFamily::gaussian();
  for (double x = -3.0; x <= 3.0; x += 0.5)
    for (double z = -3.0; z <= 3.0; z += 0.5) {
      const double sf = 0.8;
      CHECK(std::fabs(sf * g.delta((x - z) / sf) + z - truncated_mean(x, z, History::Effort, sf)) < 1e-9);
    }
}

TEST_CASE("conditional expectations") {
  const auto lap = NoiseFamily::laplace();
  // E[U | U <= w] = w - delta(w) for any family
  for (double w : {-4.0, -0.5, 0.0, 2.0})
    CHECK(expect_below(lap, w, [](double u) { return u; }) == Approx(w - lap.delta(w)).epsilon(1e-9));
  const auto g = NoiseFamily::gaussian();
  CHECK(expect_above(g, 0.3, [](double) { return 1.0; }) == Approx(1.0).epsilon(1e-12));
  CHECK(expect_above(g, 0.3, [](double u) { return u; }) == Approx(reversed_hazard(-0.3)).epsilon(1e-10));
  // a narrow integrand far from the truncation point
  auto narrow = [](double u) { return std_normal_cdf((u - 1.0) * 1e4); };
  CHECK(expect_below(g, 40.0, narrow) == Approx(std_normal_cdf(-1.0)).epsilon(1e-6));
}

}
