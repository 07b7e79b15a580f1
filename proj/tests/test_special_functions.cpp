#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/owens_t.hpp>
#include <cmath>

#include "ratbounds/special_functions.hpp"

using namespace ratbounds;
using doctest::Approx;

TEST_SUITE("special_functions") {

TEST_CASE("gaussian pdf and cdf") {
  CHECK(std_normal_pdf(0.0) == Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(std_normal_pdf(1.0) == std_normal_pdf(-1.0));
  CHECK(std_normal_pdf(8.0) < 1e-14);
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std_normal_cdf(INFINITY) == 1.0);
  CHECK(std_normal_cdf(-INFINITY) == 0.0);
  // mpmath quadrature of phi over (-inf, 1]
  CHECK(std::fabs(std_normal_cdf(1.0) - 0.84134474606854295) < 1e-12);
  for (double x = -30.0; x <= 30.0; x += 0.7) {
    CHECK(std::fabs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) < 1e-15);
    const double lc = log_std_normal_cdf(x);
    CHECK(lc == Approx(std::log(boost::math::cdf(boost::math::normal(), x))).epsilon(1e-13));
  }
  CHECK(log_std_normal_cdf(-100.0) == Approx(-5005.5242086942).epsilon(1e-12));
}

TEST_CASE("quantile inverts the cdf, including from log space") {
  for (double p : {1e-300, 1e-20, 1e-5, 0.01, 0.3, 0.5, 0.77, 0.999999})
    CHECK(std_normal_cdf(std_normal_quantile(p)) == Approx(p).epsilon(1e-12));
  for (double lp : {-2000.0, -700.0, -50.0, -1.0, -1e-3})
    CHECK(log_std_normal_cdf(std_normal_quantile_from_log(lp)) == Approx(lp).epsilon(1e-11));
}

TEST_CASE("reversed hazard") {
  CHECK(reversed_hazard(0.0) == Approx(0.7978845608028654).epsilon(1e-14));
  // x + lambda(x) behaves like -1/x on the far left
  CHECK(reversed_hazard_shift(-40.0) == Approx(0.024968847207263723).epsilon(1e-11));
  CHECK(-40.0 + reversed_hazard(-40.0) == Approx(0.024968847207263723).epsilon(1e-9));
  CHECK(std::fabs(reversed_hazard_shift(-1e7)) < 1e-6);
  CHECK(reversed_hazard(5.0) < 1.5e-6);
  CHECK(reversed_hazard(5.0) == Approx(std_normal_pdf(5.0) / std_normal_cdf(5.0)).epsilon(1e-14));
  // continuity across the continued-fraction switch
  CHECK(reversed_hazard(-8.0 - 1e-9) == Approx(reversed_hazard(-8.0 + 1e-9)).epsilon(1e-8));
  double prev_l = INFINITY, prev_s = -INFINITY;
  for (double x = -200.0; x <= 30.0; x += 0.25) {
    const double l = reversed_hazard(x), s = reversed_hazard_shift(x), d = reversed_hazard_deriv(x);
    CHECK(l > 0.0);
    CHECK(l < prev_l);
    CHECK(s > 0.0);
    CHECK(s > prev_s);
    CHECK(d < 0.0);
    CHECK(d > -1.0);
    prev_l = l;
    prev_s = s;
  }
}

TEST_CASE("reversed hazard derivative matches central differences") {
  for (double x = -30.0; x <= 10.0; x += 0.11) {
    const double h = 1e-5;
    const double fd = (reversed_hazard(x + h) - reversed_hazard(x - h)) / (2.0 * h);
    CHECK(std::fabs(fd + reversed_hazard(x) * (x + reversed_hazard(x))) < 1e-8);
  }
}

TEST_CASE("owens t against boost and its symmetries") {
  CHECK(owens_t(0.7, 0.0) == 0.0);
  CHECK(owens_t(0.0, 1.0) == Approx(0.125).epsilon(1e-14));
  CHECK(std::fabs(owens_t(0.7, 0.4) - 0.046812042887140457) < 1e-12);
  for (double y : {-6.0, -1.5, 0.0, 0.3, 2.0, 9.0})
    for (double a : {-40.0, -1.0, 0.2, 1.0, 3.5, 100.0}) {
      CHECK(std::fabs(owens_t(y, a) - boost::math::owens_t(y, a)) < 1e-12);
      CHECK(owens_t(-y, a) == owens_t(y, a));
      CHECK(owens_t(y, -a) == -owens_t(y, a));
    }
}

TEST_CASE("s_tilde") {
  CHECK(s_tilde(1.0, 0.6) == Approx(0.5 - owens_t(1.0, 0.6) / std_normal_cdf(1.0)).epsilon(1e-13));
  CHECK(std::fabs(s_tilde(1.0, 0.6) - 0.44124166646101943) < 1e-12);
  const double deep = s_tilde(-30.0, 0.5);
  CHECK(deep > 0.0);
  CHECK(deep < 1e-3);
  CHECK(deep == Approx(2.9348000183566566e-51).epsilon(1e-8));
  CHECK(s_tilde(-3.0, 0.5) == Approx(0.051728082857881285).epsilon(1e-11));
  for (double nu : {0.1, 0.5, 0.9, 3.0}) {
    CHECK(std::fabs(s_tilde(30.0, nu) - 0.5) < 1e-9);
    double prev = 0.0;
    for (double y = -20.0; y <= 20.0; y += 0.5) {
      const double s = s_tilde(y, nu);
      // past y ~ 8 the gap to 1/2 is below double resolution, and for large
      // nu the far left underflows
      if (y <= 6.0 && prev > 0.0) {
        CHECK(s > prev);
        CHECK(s < 0.5);
      } else {
        CHECK(s >= prev);
        CHECK(s <= 0.5);
      }
      prev = s;
      // total probability over the leader's action
      const double tp = std_normal_cdf(y) * s + std_normal_cdf(-y) * (1.0 - s_tilde(-y, nu));
      CHECK(std::fabs(tp - 0.5) < 1e-12);
    }
  }
}

TEST_CASE("s_tilde derivative") {
  for (double nu : {0.2, 0.577, 0.95}) {
    for (double y : {-30.0, 30.0}) {
      const double h = 1e-5;
      CHECK(std::fabs((s_tilde(y + h, nu) - s_tilde(y - h, nu)) / (2.0 * h)) < 1e-8);
    }
    for (double y = -6.0; y <= 6.0; y += 0.37) {
      const double h = 1e-5;
      const double fd = (s_tilde(y + h, nu) - s_tilde(y - h, nu)) / (2.0 * h);
      CHECK(s_tilde_dy(y, nu) == Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("gaussian cdf convolution") {
  CHECK(gauss_cdf_convolution(0.0, 2.3) == 0.5);
  CHECK(gauss_cdf_convolution(1.0, 0.0) == std_normal_cdf(1.0));
  CHECK(std::fabs(gauss_cdf_convolution(0.5, 1.2) - 0.62555078075867009) < 1e-10);
  auto f = [](double e) { return std_normal_pdf(e) * std_normal_cdf(-0.8 + 0.3 * e); };
  const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -INFINITY, INFINITY);
  CHECK(std::fabs(gauss_cdf_convolution(-0.8, 0.3) - q) < 1e-10);
}

}
