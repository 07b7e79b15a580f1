#include <cmath>
#include <cstdint>
#include <cstring>

#include "erfcx_chebyshev.hpp"
#include "kernels_internal.hpp"

namespace ratbounds::kernels::detail {

namespace {

constexpr double kLog2e = 1.4426950408889634074;
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrt2OverPi = 0.79788456080286535588;

// exp(x) for x <= 0; the result is scaled by two exact powers of two so the
// subnormal range needs no special case.
double exp_nonpos(double x) {
  if (x < -1400.0) x = -1400.0;
  const double k = std::nearbyint(x * kLog2e);
  const double r = (x - k * kLn2Hi) - k * kLn2Lo;
  double p = 1.0 / 6227020800.0;
  p = p * r + 1.0 / 479001600.0;
  p = p * r + 1.0 / 39916800.0;
  p = p * r + 1.0 / 3628800.0;
  p = p * r + 1.0 / 362880.0;
  p = p * r + 1.0 / 40320.0;
  p = p * r + 1.0 / 5040.0;
  p = p * r + 1.0 / 720.0;
  p = p * r + 1.0 / 120.0;
  p = p * r + 1.0 / 24.0;
  p = p * r + 1.0 / 6.0;
  p = p * r + 0.5;
  p = p * r + 1.0;
  p = p * r + 1.0;
  const double k1 = std::floor(0.5 * k);
  const double k2 = k - k1;
  return p * std::ldexp(1.0, static_cast<int>(k1)) * std::ldexp(1.0, static_cast<int>(k2));
}

// exp(-z^2) with z^2 split as hi^2 + lo (hi^2 exact).
double exp_neg_square(double z) {
  std::uint64_t bits;
  std::memcpy(&bits, &z, sizeof bits);
  bits &= ~((std::uint64_t{1} << 27) - 1);
  double hi;
  std::memcpy(&hi, &bits, sizeof hi);
  const double lo = (z - hi) * (z + hi);
  return exp_nonpos(-hi * hi) * exp_nonpos(-lo);
}

double erfcx_nonneg(double z) {
  if (z > 1e300) z = 1e300;
  const double t = (z - kErfcxMap) / (z + kErfcxMap);
  const double t2 = 2.0 * t;
  double b1 = 0.0, b2 = 0.0;
  for (int j = kErfcxTerms - 1; j >= 1; --j) {
    const double b0 = t2 * b1 - b2 + kErfcxCheb[j];
    b2 = b1;
    b1 = b0;
  }
  return (t * b1 - b2 + kErfcxCheb[0]) / (1.0 + 2.0 * z);
}

double cdf(double x) {
  const double z = std::fabs(x) * kInvSqrt2;
  const double half_tail = 0.5 * erfcx_nonneg(z) * exp_neg_square(z);
  return x < 0.0 ? half_tail : 1.0 - half_tail;
}

double hazard(double x) {
  const double z = std::fabs(x) * kInvSqrt2;
  const double ex = erfcx_nonneg(z);
  if (x < 0.0) return kSqrt2OverPi / ex;
  const double e = exp_neg_square(z);
  return kInvSqrt2Pi * e / (1.0 - 0.5 * ex * e);
}

void normal_cdf_affine(const double* x, double* out, std::size_t n, double a, double b) {
  for (std::size_t i = 0; i < n; ++i) out[i] = cdf(a + b * x[i]);
}

void reversed_hazard(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = hazard(x[i]);
}

void residual_main(const double* x, double* out, std::size_t n, double z, double s, double c,
                   double inv_n, bool effort) {
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (x[i] - z) / s;
    if (effort)
      out[i] = x[i] + s * hazard(w) - 0.5 * c * cdf(w);
    else
      out[i] = x[i] - s * hazard(-w) - 0.5 * c * (cdf(w) + 1.0) - inv_n;
  }
}

}  // namespace

const Table kScalarTable = {normal_cdf_affine, reversed_hazard, residual_main};

}  // namespace ratbounds::kernels::detail
