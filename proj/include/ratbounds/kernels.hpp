#pragma once

#include <cstddef>
#include <span>

// Batched Gaussian kernels for the data-parallel loops: residual grid scans
// and Monte Carlo averaging. A scalar reference and an AVX2+FMA variant share
// one algorithm (erfcx by a mapped Chebyshev series, exp by Cody-Waite
// reduction), so the two agree to a few ulps. The variant is picked once at
// runtime from CPUID; RATBOUNDS_SIMD=scalar forces the reference.

namespace ratbounds::kernels {

enum class Isa { Scalar, Avx2 };

struct Table {
  // out[i] = Phi(a + b x[i])
  void (*normal_cdf_affine)(const double* x, double* out, std::size_t n, double a, double b);
  // out[i] = lambda(x[i])
  void (*reversed_hazard)(const double* x, double* out, std::size_t n);
  // Fixed-point residual of the perfectly-informed-leader model at x = x_h:
  //   effort:    x + s lambda((x-z)/s) - c Phi((x-z)/s)/2
  //   no effort: x - s lambda((z-x)/s) - c (Phi((x-z)/s)+1)/2 - 1/n
  // with c = (n-1)/n and inv_n = 1/n; `effort` selects the branch.
  void (*residual_main)(const double* x, double* out, std::size_t n, double z, double s, double c,
                        double inv_n, bool effort);
};

bool isa_available(Isa isa);
const char* isa_name(Isa isa);
Isa active_isa();
const Table& table(Isa isa);
inline const Table& active() { return table(active_isa()); }

void normal_cdf_affine(std::span<const double> x, std::span<double> out, double a = 0.0,
                       double b = 1.0);
void reversed_hazard(std::span<const double> x, std::span<double> out);
void residual_main(std::span<const double> x, std::span<double> out, double z, double s, double c,
                   double inv_n, bool effort);

}  // namespace ratbounds::kernels
