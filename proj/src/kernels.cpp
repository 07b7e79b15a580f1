#include "ratbounds/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "kernels_internal.hpp"

namespace ratbounds::kernels {

namespace {

void check_sizes(std::size_t in, std::size_t out) {
  if (in != out) throw std::invalid_argument("kernels: input and output spans differ in length");
}

Isa detect() {
  if (const char* env = std::getenv("RATBOUNDS_SIMD"); env && std::string_view(env) == "scalar")
    return Isa::Scalar;
  return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

}  // namespace

bool isa_available(Isa isa) {
  if (isa == Isa::Scalar) return true;
#if defined(RATBOUNDS_HAVE_AVX2)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const char* isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

const Table& table(Isa isa) {
#if defined(RATBOUNDS_HAVE_AVX2)
  if (isa == Isa::Avx2) {
    if (!isa_available(Isa::Avx2)) throw std::runtime_error("kernels: AVX2 not supported on this CPU");
    return detail::kAvx2Table;
  }
#endif
  if (isa != Isa::Scalar) throw std::runtime_error("kernels: variant not compiled in");
  return detail::kScalarTable;
}

void normal_cdf_affine(std::span<const double> x, std::span<double> out, double a, double b) {
  check_sizes(x.size(), out.size());
  active().normal_cdf_affine(x.data(), out.data(), x.size(), a, b);
}

void reversed_hazard(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size());
  active().reversed_hazard(x.data(), out.data(), x.size());
}

void residual_main(std::span<const double> x, std::span<double> out, double z, double s, double c,
                   double inv_n, bool effort) {
  check_sizes(x.size(), out.size());
  active().residual_main(x.data(), out.data(), x.size(), z, s, c, inv_n, effort);
}

}  // namespace ratbounds::kernels
