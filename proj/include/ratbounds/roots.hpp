#pragma once

#include <functional>

namespace ratbounds {

// Root of a continuous f on [lo, hi] given f(lo) and f(hi) of opposite sign
// (a zero at an endpoint is returned as is). Bracketing with secant-type
// steps (TOMS 748); stops when the bracket is below 1e-12 plus a few ulps.
double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                      double f_hi, double tol = 1e-12);

}  // namespace ratbounds
