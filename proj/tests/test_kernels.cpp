#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>
#include <string_view>
#include <vector>

#include "ratbounds/kernels.hpp"
#include "ratbounds/payoffs.hpp"
#include "ratbounds/special_functions.hpp"

using namespace ratbounds;
namespace k = ratbounds::kernels;

namespace {

std::vector<double> probe_points() {
  std::vector<double> x;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-45.0, 45.0);
  for (int i = 0; i < 20000; ++i) x.push_back(u(rng));
  // odd lengths exercise the vector tail; exact breakpoints of the series
  for (double v : {-1e3, -38.5, -26.0, -8.0, -1e-300, 0.0, 1e-300, 0.5, 8.0, 26.0, 38.5, 1e3}) x.push_back(v);
  return x;
}

// Both variants share one algorithm; a few ulps times the exp(-x^2/2) split.
double ulp_budget(double x) { return 8.0 * 0x1p-52 * (1.0 + x * x); }

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernels agree with the library functions") {
  const auto x = probe_points();
  std::vector<double> out(x.size());
  const auto& t = k::table(k::Isa::Scalar);
  t.reversed_hazard(x.data(), out.data(), x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::fabs(out[i] - reversed_hazard(x[i])) <= 1e-13 * std::max(1.0, std::fabs(x[i])));
  t.normal_cdf_affine(x.data(), out.data(), x.size(), 0.2, 0.7);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ref = std_normal_cdf(0.2 + 0.7 * x[i]);
    CHECK(std::fabs(out[i] - ref) <= ulp_budget(0.2 + 0.7 * x[i]) * ref + 1e-300);
  }
}

TEST_CASE("residual kernel matches the closed-form residual") {
  ModelParams p;
  p.n = 4;
  p.sigma_f = 0.3;
  for (History h : {History::Effort, History::NoEffort}) {
    const double z = 0.25;
    std::vector<double> x;
    for (double v = -3.0; v <= 3.0; v += 0.013) x.push_back(v);
    std::vector<double> out(x.size());
    k::residual_main(x, out, z, p.sigma_f, p.coord(), 1.0 / p.n, h == History::Effort);
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(out[i] == doctest::Approx(follower_fixed_point_residual(x[i], z, h, p)).epsilon(1e-11));
  }
}

TEST_CASE("avx2 kernels match the scalar reference") {
  if (!k::isa_available(k::Isa::Avx2)) {
    MESSAGE("AVX2 not available; only the scalar reference is exercised");
    return;
  }
  const auto x = probe_points();
  std::vector<double> a(x.size()), b(x.size());
  const auto& s = k::table(k::Isa::Scalar);
  const auto& v = k::table(k::Isa::Avx2);

  auto compare = [&] {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (a[i] == b[i]) continue;
      CHECK(std::fabs(a[i] - b[i]) <= ulp_budget(x[i]) * std::fabs(a[i]));
    }
  };
  s.reversed_hazard(x.data(), a.data(), x.size());
  v.reversed_hazard(x.data(), b.data(), x.size());
  compare();
  s.normal_cdf_affine(x.data(), a.data(), x.size(), -0.4, 1.3);
  v.normal_cdf_affine(x.data(), b.data(), x.size(), -0.4, 1.3);
  compare();
  for (bool effort : {true, false}) {
    s.residual_main(x.data(), a.data(), x.size(), 0.1, 0.7, 0.75, 0.25, effort);
    v.residual_main(x.data(), b.data(), x.size(), 0.1, 0.7, 0.75, 0.25, effort);
    for (std::size_t i = 0; i < x.size(); ++i)
      CHECK(std::fabs(a[i] - b[i]) <= 1e-12 * (1.0 + std::fabs(x[i])));
  }
  // sub-vector lengths take the scalar tail path
  for (std::size_t n = 0; n < 9; ++n) {
    s.reversed_hazard(x.data(), a.data(), n);
    v.reversed_hazard(x.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::fabs(a[i] - b[i]) <= ulp_budget(x[i]) * a[i]);
  }
}

TEST_CASE("runtime selection honours RATBOUNDS_SIMD") {
  const char* env = std::getenv("RATBOUNDS_SIMD");
  if (env && std::string_view(env) == "scalar")
    CHECK(k::active_isa() == k::Isa::Scalar);
  else
    CHECK(k::active_isa() == (k::isa_available(k::Isa::Avx2) ? k::Isa::Avx2 : k::Isa::Scalar));
  CHECK(std::string_view(k::isa_name(k::Isa::Scalar)) == "scalar");
}

TEST_CASE("span wrappers reject mismatched sizes") {
  std::vector<double> x(4), out(3);
  CHECK_THROWS(k::reversed_hazard(x, out));
}

}
