"""Regenerates src/erfcx_chebyshev.hpp.

g(t) = (1 + 2z) erfcx(z), z = K (1 + t) / (1 - t), expanded in Chebyshev
polynomials on [-1, 1] from 160 Chebyshev nodes at 50 digits.
"""
import mpmath as mp

mp.mp.dps = 50
K = 3
N = 160
TERMS = 30


def g(t):
    z = K * (1 + t) / (1 - t)
    return (1 + 2 * z) * mp.erfc(z) * mp.exp(z * z)


nodes = [mp.cos(mp.pi * (k + mp.mpf(1) / 2) / N) for k in range(N)]
vals = [g(x) for x in nodes]
coeffs = []
for j in range(TERMS):
    s = mp.fsum(vals[k] * mp.cos(mp.pi * j * (k + mp.mpf(1) / 2) / N) for k in range(N))
    coeffs.append(2 * s / N)
coeffs[0] /= 2

print("#pragma once")
print("// Generated by tools/gen_erfcx_chebyshev.py; do not edit.")
print("")
print("namespace ratbounds::kernels::detail {")
print("")
print(f"inline constexpr double kErfcxMap = {K}.0;")
print(f"inline constexpr int kErfcxTerms = {TERMS};")
print("inline constexpr double kErfcxCheb[kErfcxTerms] = {")
for c in coeffs:
    print(f"    {mp.nstr(c, 20, min_fixed=0, max_fixed=0)},")
print("};")
print("")
print("}  // namespace ratbounds::kernels::detail")
