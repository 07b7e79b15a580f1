#include <immintrin.h>

#include <cstdint>

#include "erfcx_chebyshev.hpp"
#include "kernels_internal.hpp"

namespace ratbounds::kernels::detail {

namespace {

using v4d = __m256d;

inline v4d splat(double v) { return _mm256_set1_pd(v); }

// 2^k for integral k in [-1022, 1023] held as doubles.
inline v4d pow2(v4d k) {
  const v4d magic = splat(6755399441055744.0);  // 2^52 + 2^51
  const __m256i bits = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(_mm256_add_pd(k, splat(1023.0)), magic)),
                                        _mm256_castpd_si256(magic));
  return _mm256_castsi256_pd(_mm256_slli_epi64(bits, 52));
}

inline v4d exp_nonpos(v4d x) {
  x = _mm256_max_pd(x, splat(-1400.0));
  const v4d k = _mm256_round_pd(_mm256_mul_pd(x, splat(1.4426950408889634074)),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  v4d r = _mm256_fnmadd_pd(k, splat(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(k, splat(1.90821492927058770002e-10), r);
  v4d p = splat(1.0 / 6227020800.0);
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 479001600.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 39916800.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 3628800.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 362880.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 40320.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 5040.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 720.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 120.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 24.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0 / 6.0));
  p = _mm256_fmadd_pd(p, r, splat(0.5));
  p = _mm256_fmadd_pd(p, r, splat(1.0));
  p = _mm256_fmadd_pd(p, r, splat(1.0));
  const v4d k1 = _mm256_floor_pd(_mm256_mul_pd(k, splat(0.5)));
  const v4d k2 = _mm256_sub_pd(k, k1);
  return _mm256_mul_pd(_mm256_mul_pd(p, pow2(k1)), pow2(k2));
}

inline v4d exp_neg_square(v4d z) {
  const __m256i mask = _mm256_set1_epi64x(~((std::int64_t{1} << 27) - 1));
  const v4d hi = _mm256_castsi256_pd(_mm256_and_si256(_mm256_castpd_si256(z), mask));
  const v4d lo = _mm256_mul_pd(_mm256_sub_pd(z, hi), _mm256_add_pd(z, hi));
  const v4d zero = _mm256_setzero_pd();
  return _mm256_mul_pd(exp_nonpos(_mm256_sub_pd(zero, _mm256_mul_pd(hi, hi))),
                       exp_nonpos(_mm256_sub_pd(zero, lo)));
}

inline v4d erfcx_nonneg(v4d z) {
  z = _mm256_min_pd(z, splat(1e300));
  const v4d kmap = splat(kErfcxMap);
  const v4d t = _mm256_div_pd(_mm256_sub_pd(z, kmap), _mm256_add_pd(z, kmap));
  const v4d t2 = _mm256_add_pd(t, t);
  v4d b1 = _mm256_setzero_pd(), b2 = _mm256_setzero_pd();
  for (int j = kErfcxTerms - 1; j >= 1; --j) {
    const v4d b0 = _mm256_add_pd(_mm256_fmsub_pd(t2, b1, b2), splat(kErfcxCheb[j]));
    b2 = b1;
    b1 = b0;
  }
  const v4d g = _mm256_add_pd(_mm256_fmsub_pd(t, b1, b2), splat(kErfcxCheb[0]));
  return _mm256_div_pd(g, _mm256_fmadd_pd(splat(2.0), z, splat(1.0)));
}

inline v4d vabs(v4d x) { return _mm256_andnot_pd(splat(-0.0), x); }

inline v4d cdf(v4d x) {
  const v4d z = _mm256_mul_pd(vabs(x), splat(0.70710678118654752440));
  const v4d half_tail = _mm256_mul_pd(_mm256_mul_pd(splat(0.5), erfcx_nonneg(z)), exp_neg_square(z));
  const v4d neg = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
  return _mm256_blendv_pd(_mm256_sub_pd(splat(1.0), half_tail), half_tail, neg);
}

inline v4d hazard(v4d x) {
  const v4d z = _mm256_mul_pd(vabs(x), splat(0.70710678118654752440));
  const v4d ex = erfcx_nonneg(z);
  const v4d left = _mm256_div_pd(splat(0.79788456080286535588), ex);
  const v4d e = exp_neg_square(z);
  const v4d right = _mm256_div_pd(_mm256_mul_pd(splat(0.39894228040143267794), e),
                                  _mm256_fnmadd_pd(_mm256_mul_pd(splat(0.5), ex), e, splat(1.0)));
  const v4d neg = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_LT_OQ);
  return _mm256_blendv_pd(right, left, neg);
}

void normal_cdf_affine(const double* x, double* out, std::size_t n, double a, double b) {
  const v4d va = splat(a), vb = splat(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, cdf(_mm256_fmadd_pd(vb, _mm256_loadu_pd(x + i), va)));
  if (i < n) kScalarTable.normal_cdf_affine(x + i, out + i, n - i, a, b);
}

void reversed_hazard(const double* x, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, hazard(_mm256_loadu_pd(x + i)));
  if (i < n) kScalarTable.reversed_hazard(x + i, out + i, n - i);
}

void residual_main(const double* x, double* out, std::size_t n, double z, double s, double c,
                   double inv_n, bool effort) {
  const v4d vz = splat(z), vs = splat(s), half_c = splat(0.5 * c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const v4d xi = _mm256_loadu_pd(x + i);
    const v4d w = _mm256_div_pd(_mm256_sub_pd(xi, vz), vs);
    v4d r;
    if (effort) {
      r = _mm256_fmadd_pd(vs, hazard(w), xi);
      r = _mm256_fnmadd_pd(half_c, cdf(w), r);
    } else {
      r = _mm256_fnmadd_pd(vs, hazard(_mm256_sub_pd(_mm256_setzero_pd(), w)), xi);
      r = _mm256_fnmadd_pd(half_c, _mm256_add_pd(cdf(w), splat(1.0)), r);
      r = _mm256_sub_pd(r, splat(inv_n));
    }
    _mm256_storeu_pd(out + i, r);
  }
  if (i < n) kScalarTable.residual_main(x + i, out + i, n - i, z, s, c, inv_n, effort);
}

}  // namespace

const Table kAvx2Table = {normal_cdf_affine, reversed_hazard, residual_main};

}  // namespace ratbounds::kernels::detail
