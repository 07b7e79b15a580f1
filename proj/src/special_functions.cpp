#include "ratbounds/special_functions.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ratbounds/quadrature.hpp"

namespace ratbounds {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kTailSwitch = -8.0;

// t + k/(t + (k+1)/(t + (k+2)/(t + ...))) by modified Lentz, t >= 8.
double mills_cf(double t, int k) {
  const double tiny = 1e-300;
  double f = t, c = t, d = 0.0;
  for (int j = k; j < k + 5000; ++j) {
    d = t + j * d;
    if (d == 0.0) d = tiny;
    c = t + j / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return f;
}

double scaled_owen_integral(double y, double a) {
  const double y2 = y * y;
  auto g = [y2](double t) { return std::exp(-0.5 * t * t * y2) / (1.0 + t * t); };
  const double knee = std::min(a, 1.0 / std::max(std::fabs(y), 1e-300));
  const double brk[] = {knee};
  return quad::integrate(g, 0.0, a, 1e-16, 1e-15, brk).value;
}

// E[Phi(nu X) | X <= y] for y < 0, the cancellation-free form of s_tilde:
// substitute X = y - v and weight by phi(y - v)/Phi(y) in log space.
double s_tilde_left(double y, double nu) {
  const double log_norm = log_std_normal_cdf(y);
  auto g = [=](double v) {
    const double x = y - v;
    return std::exp(-0.5 * x * x - kLogSqrt2Pi - log_norm + log_std_normal_cdf(nu * x));
  };
  // The truncated density decays like exp(-|y| v); its scale is 1/|y|.
  const double scale = 1.0 / std::max(-y, 1.0);
  const double brk[] = {scale, 4.0 * scale, 16.0 * scale};
  return quad::integrate(g, 0.0, 40.0 * scale + 10.0, 0.0, 1e-14, brk).value;
}

}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-x / kSqrt2);
}

double log_std_normal_cdf(double x) {
  if (x == -std::numeric_limits<double>::infinity()) return x;
  if (x < kTailSwitch) return -0.5 * x * x - kLogSqrt2Pi - std::log(mills_cf(-x, 1));
  if (x > 5.0) return std::log1p(-std_normal_cdf(-x));
  return std::log(std_normal_cdf(x));
}

double std_normal_quantile(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("std_normal_quantile: p outside [0,1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
}

double std_normal_quantile_from_log(double log_p) {
  if (log_p > 0.0) throw std::domain_error("std_normal_quantile_from_log: log p > 0");
  if (log_p > -600.0) return std_normal_quantile(std::exp(log_p));
  // Newton on log Phi(x) = log_p from the leading-order tail inverse.
  double x = -std::sqrt(-2.0 * log_p);
  for (int i = 0; i < 60; ++i) {
    const double step = (log_std_normal_cdf(x) - log_p) / reversed_hazard(x);
    x -= step;
    if (std::fabs(step) < 1e-15 * std::fabs(x)) break;
  }
  return x;
}

double mills_ratio(double x) {
  if (x < kTailSwitch) return 1.0 / mills_cf(-x, 1);
  return std_normal_cdf(x) / std_normal_pdf(x);
}

double reversed_hazard(double x) {
  if (x == std::numeric_limits<double>::infinity()) return 0.0;
  if (x < kTailSwitch) return mills_cf(-x, 1);
  return std_normal_pdf(x) / std_normal_cdf(x);
}

double reversed_hazard_shift(double x) {
  if (x < kTailSwitch) return 1.0 / mills_cf(-x, 2);
  return x + reversed_hazard(x);
}

double reversed_hazard_deriv(double x) { return -reversed_hazard(x) * reversed_hazard_shift(x); }

double owens_t(double y, double a) {
  if (a == 0.0) return 0.0;
  if (a < 0.0) return -owens_t(y, -a);
  const double y2 = y * y;
  auto g = [y2](double t) {
    const double s = 1.0 + t * t;
    return std::exp(-0.5 * s * y2) / s;
  };
  return quad::integrate(g, 0.0, a, 1e-14, 1e-14).value / (2.0 * kPi);
}

double s_tilde(double y, double nu) {
  if (!(nu > 0.0)) throw std::domain_error("s_tilde: nu must be positive");
  if (y == std::numeric_limits<double>::infinity()) return 0.5;
  if (y == -std::numeric_limits<double>::infinity()) return 0.0;
  if (y < 0.0) return s_tilde_left(y, nu);
  return 0.5 - reversed_hazard(y) * scaled_owen_integral(y, nu) * kInvSqrt2Pi;
}

double s_tilde_dy(double y, double nu) {
  if (std::isinf(y)) return 0.0;
  return reversed_hazard(y) * (std_normal_cdf(nu * y) - s_tilde(y, nu));
}

double gauss_cdf_convolution(double a, double b) { return std_normal_cdf(a / std::sqrt(1.0 + b * b)); }

}  // namespace ratbounds
