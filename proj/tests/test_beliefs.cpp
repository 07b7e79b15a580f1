#include <doctest.h>

#include <cmath>

#include "ratbounds/beliefs.hpp"
#include "ratbounds/rationalizability.hpp"
#include "ratbounds/special_functions.hpp"

using namespace ratbounds;
using doctest::Approx;

namespace {
constexpr History kE = History::Effort;
constexpr History kN = History::NoEffort;
}  // namespace

TEST_SUITE("beliefs") {

TEST_CASE("truncated mean") {
  CHECK(truncated_mean(0.0, 0.0, kE, 1.0) == Approx(0.7978845608).epsilon(1e-10));
  for (double z : {-1.0, 0.0, 2.5})
    for (double sf : {0.01, 1.0, 3.0}) {
      // far side of z: the excess over z is sf * (u + lambda(u)) at u = -40
      const double excess = 0.024968847207263723 * sf;
      CHECK(truncated_mean(z - 40.0 * sf, z, kE, sf) - z == Approx(excess).epsilon(1e-9));
      CHECK(z - truncated_mean(z + 40.0 * sf, z, kN, sf) == Approx(excess).epsilon(1e-9));
    }
  double prev_x = -INFINITY, prev_z = -INFINITY;
  for (double t = -5.0; t <= 5.0; t += 0.1) {
    const double mx = truncated_mean(t, 0.3, kN, 0.7);
    const double mz = truncated_mean(0.3, t, kE, 0.7);
    CHECK(mx > prev_x);
    CHECK(mz > prev_z);
    prev_x = mx;
    prev_z = mz;
  }
  // Laplace: sigma_f delta((x - z)/sigma_f) + z
  const auto lap = NoiseFamily::laplace();
  CHECK(truncated_mean(0.5, 0.0, kE, 2.0, lap) == Approx(2.0 * lap.delta(0.25)).epsilon(1e-10));
}

TEST_CASE("main posterior cdf") {
  MainPosterior post{0.5, 0.0, kE, 1.0};
  CHECK(posterior_cdf_main(0.0, post) == 0.0);
  CHECK(posterior_cdf_main(-3.0, post) == 0.0);
  CHECK(posterior_cdf_main(1e3, post) == 1.0);
  const double closed = 1.0 - std_normal_cdf(0.5 - 1.0) / std_normal_cdf(0.5);
  CHECK(posterior_cdf_main(1.0, post) == Approx(closed).epsilon(1e-13));
  MainPosterior no{0.5, 0.0, kN, 1.0};
  CHECK(posterior_cdf_main(0.0, no) == 1.0);
  CHECK(posterior_cdf_main(-1.0, no) == Approx(std_normal_cdf(-1.5) / std_normal_cdf(-0.5)).epsilon(1e-13));
  // deep truncation keeps a proper distribution
  MainPosterior deep{-60.0, 0.0, kE, 1.0};
  CHECK(posterior_cdf_main(0.01, deep) == Approx(0.45130720187114453).epsilon(1e-10));
}

TEST_CASE("main posterior first-order dominance") {
  for (History h : {kE, kN})
    for (double th = -2.0; th <= 2.0; th += 0.25) {
      double prev_x = 2.0, prev_z = 2.0;
      for (double t = -2.0; t <= 2.0; t += 0.25) {
        const double fx = posterior_cdf_main(th, MainPosterior{t, 0.1, h, 0.8});
        const double fz = posterior_cdf_main(th, MainPosterior{0.1, t, h, 0.8});
        CHECK(fx <= prev_x);
        CHECK(fz <= prev_z);
        prev_x = fx;
        prev_z = fz;
      }
    }
}

TEST_CASE("extension posterior cdf") {
  ExtPosterior p{0.2, 0.0, kE, 1.0, 0.5};
  CHECK(posterior_cdf_ext(0.4, p) == Approx(0.30068022863769427).epsilon(1e-9));
  CHECK(std::fabs(posterior_cdf_ext(60.0, p) - 1.0) < 1e-9);
  CHECK(posterior_cdf_ext(-60.0, p) < 1e-9);
  // total probability against the unconditional N(x, sigma_f^2)
  for (double x : {-1.0, 0.3, 2.0})
    for (double th : {-1.5, 0.0, 0.4, 2.2}) {
      const double z = 0.3, sf = 0.9, sl = 0.6;
      const double s = std::hypot(sf, sl);
      const double mix = std_normal_cdf((x - z) / s) * posterior_cdf_ext(th, ExtPosterior{x, z, kE, sf, sl}) +
                         std_normal_cdf((z - x) / s) * posterior_cdf_ext(th, ExtPosterior{x, z, kN, sf, sl});
      CHECK(std::fabs(mix - std_normal_cdf((th - x) / sf)) < 1e-8);
    }
  double prev = 2.0;
  for (double x = -2.0; x <= 2.0; x += 0.2) {
    const double f = posterior_cdf_ext(0.1, ExtPosterior{x, 0.0, kN, 0.5, 0.5});
    CHECK(f <= prev);
    prev = f;
  }
}

TEST_CASE("extension posterior mean") {
  const double sf = 0.8, sl = 0.6, s = std::hypot(sf, sl);
  CHECK(posterior_mean_ext(0.4, 0.4, kE, sf, sl) == Approx(0.4 + sf * sf / s * reversed_hazard(0.0)).epsilon(1e-13));
  CHECK(posterior_mean_ext(1.0, 0.0, kE, 1.0, 1.0) == Approx(1.2889781813726314).epsilon(1e-12));
  CHECK(posterior_mean_ext(1.0, 0.0, kN, 1.0, 1.0) == Approx(0.083647179350650792).epsilon(1e-11));
  CHECK(posterior_mean_ext(-2.0, 0.3, kE, 0.5, 0.2) == Approx(0.081912790832336514).epsilon(1e-11));
  CHECK(std::fabs(posterior_mean_ext(0.7, 0.0, kE, 1.0, 1e6) - 0.7) < 1e-3);
  // against posterior_expect on the same density
  ExtPosterior post{-0.4, 0.2, kN, 0.3, 0.9};
  CHECK(posterior_expect_ext(post, [](double t) { return t; }) ==
        Approx(posterior_mean_ext(-0.4, 0.2, kN, 0.3, 0.9)).epsilon(1e-9));
  // far tail with a nearly perfect leader: close to the hard truncation
  // until |x| reaches about sf^2 / sl
  const double tail = posterior_mean_ext(-50.0, 0.0, kE, 0.5, 1e-6);
  CHECK(tail == Approx(truncated_mean(-50.0, 0.0, kE, 0.5)).epsilon(1e-4));
  CHECK(posterior_mean_ext(-1e6, 0.0, kE, 0.5, 1e-6) < 0.0);
  double prev = -INFINITY;
  for (double x = -10.0; x <= 10.0; x += 0.5) {
    const double m = posterior_mean_ext(x, 0.0, kE, 0.7, 0.4);
    CHECK(m > prev);
    prev = m;
  }
}

TEST_CASE("main rank beliefs") {
  CHECK(rank_belief_main(0.3, 0.3, kE, 0.5) == Approx(0.25).epsilon(1e-14));
  CHECK(rank_belief_main(0.3, 0.3, kN, 0.5) == Approx(0.75).epsilon(1e-14));
  double prev_x = -1.0, prev_z = 2.0;
  for (double t = -3.0; t <= 3.0; t += 0.1) {
    const double rx = rank_belief_main(t, 0.0, kE, 1.0);
    const double rz = rank_belief_main(0.0, t, kE, 1.0);
    CHECK(rx > prev_x);
    CHECK(rz < prev_z);
    prev_x = rx;
    prev_z = rz;
  }
  for (double x : {-2.0, 0.0, 1.5}) {
    const double pe = std_normal_cdf(x / 0.6);
    CHECK(std::fabs(pe * rank_belief_main(x, 0.0, kE, 0.6) + (1.0 - pe) * rank_belief_main(x, 0.0, kN, 0.6) - 0.5) <
          1e-10);
  }
}

TEST_CASE("extension rank beliefs") {
  for (double g : {0.3, 1.0, 4.0}) {
    const double sl = 0.5, sf = g * sl;
    const double alpha = g / std::sqrt(2.0 + g * g);
    CHECK(rank_belief_ext(0.1, 0.1, kE, sf, sl) == Approx(0.5 - std::atan(alpha) / kPi).epsilon(1e-10));
  }
  CHECK(rank_belief_ext(1.0, 0.0, kE, 1.0, 0.5) == Approx(0.41672361114029625).epsilon(1e-10));
  CHECK(rank_belief_ext(1.0, 0.0, kN, 1.0, 0.5) == Approx(0.86553997758098107).epsilon(1e-10));
  for (double d : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    const double sf = 0.4;
    CHECK(std::fabs(rank_belief_ext(d * sf, 0.0, kE, sf, 1e-6) - rank_belief_main(d * sf, 0.0, kE, sf)) < 1e-4);
  }
}

TEST_CASE("rank belief at the effort limit approaches one half") {
  ModelParams p;
  p.n = 4;
  p.sigma_f = 1e-3;
  const SolveReport r = solve_limits_main(p, 1e-10, false);
  REQUIRE(r.limits.x_e_hi.is_finite());
  CHECK(std::fabs(rank_belief_main(r.limits.x_e_hi.value(), 0.0, kE, p.sigma_f) - 0.5) < 1e-3);
}

TEST_CASE("posterior expectations by quadrature") {
  MainPosterior post{0.5, 0.0, kE, 1.0};
  CHECK(posterior_expect_main(post, [](double t) { return t; }) ==
        Approx(truncated_mean(0.5, 0.0, kE, 1.0)).epsilon(1e-10));
  CHECK(posterior_expect_main(post, [](double t) { return t <= 1.0 ? 1.0 : 0.0; }) ==
        Approx(posterior_cdf_main(1.0, post)).epsilon(1e-8));
  CHECK_THROWS_AS(posterior_mean_ext(0.0, 0.0, kE, -1.0, 1.0), std::invalid_argument);
}

}
