#include "ratbounds/roots.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ratbounds {

double bracketed_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                      double f_hi, double tol) {
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0) == (f_hi < 0)) throw std::runtime_error("bracketed_root: no sign change on bracket");
  auto done = [tol](double a, double b) {
    return std::fabs(b - a) <= tol + 4e-16 * std::max(std::fabs(a), std::fabs(b));
  };
  std::uintmax_t iters = 300;
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, done, iters);
  return 0.5 * (a + b);
}

}  // namespace ratbounds
