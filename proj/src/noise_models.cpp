#include "ratbounds/noise_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ratbounds/quadrature.hpp"
#include "ratbounds/special_functions.hpp"

namespace ratbounds {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

double softplus(double v) { return v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }

}  // namespace

NoiseFamily::NoiseFamily(Family kind, double scale) : kind_(kind), scale_(scale) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("NoiseFamily: scale must be positive and finite");
}

NoiseFamily NoiseFamily::parse(const std::string& name, double scale) {
  if (name == "gaussian") return gaussian(scale);
  if (name == "laplace") return laplace(scale);
  if (name == "logistic") return logistic(scale);
  throw std::invalid_argument("unknown noise family '" + name + "'");
}

std::string NoiseFamily::name() const {
  switch (kind_) {
    case Family::Laplace: return "laplace";
    case Family::Logistic: return "logistic";
    default: return "gaussian";
  }
}

double NoiseFamily::log_pdf(double x) const {
  const double v = x / scale_;
  switch (kind_) {
    case Family::Laplace: return -std::fabs(v) - std::log(2.0 * scale_);
    case Family::Logistic: {
      const double a = std::fabs(v);
      return -a - 2.0 * std::log1p(std::exp(-a)) - std::log(scale_);
    }
    default: return -0.5 * v * v - kLogSqrt2Pi - std::log(scale_);
  }
}

double NoiseFamily::pdf(double x) const { return std::exp(log_pdf(x)); }

double NoiseFamily::cdf(double x) const {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double v = x / scale_;
  switch (kind_) {
    case Family::Laplace: return v < 0 ? 0.5 * std::exp(v) : 1.0 - 0.5 * std::exp(-v);
    case Family::Logistic: return v < 0 ? std::exp(v) / (1.0 + std::exp(v)) : 1.0 / (1.0 + std::exp(-v));
    default: return std_normal_cdf(v);
  }
}

double NoiseFamily::log_cdf(double x) const {
  if (x == -std::numeric_limits<double>::infinity()) return x;
  const double v = x / scale_;
  switch (kind_) {
    case Family::Laplace: return v < 0 ? v - kLog2 : std::log1p(-0.5 * std::exp(-v));
    case Family::Logistic: return -softplus(-v);
    default: return log_std_normal_cdf(v);
  }
}

double NoiseFamily::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile: p outside [0,1]");
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Family::Laplace: return p < 0.5 ? scale_ * std::log(2.0 * p) : -scale_ * std::log(2.0 * (1.0 - p));
    case Family::Logistic: return scale_ * (std::log(p) - std::log1p(-p));
    default: return scale_ * std_normal_quantile(p);
  }
}

double NoiseFamily::quantile_from_log(double log_p) const {
  if (log_p > 0.0) throw std::domain_error("quantile_from_log: log p > 0");
  if (log_p > -30.0) return quantile(std::exp(log_p));
  switch (kind_) {
    case Family::Laplace: return scale_ * (log_p + kLog2);
    case Family::Logistic: return scale_ * (log_p - std::log1p(-std::exp(log_p)));
    default: return scale_ * std_normal_quantile_from_log(log_p);
  }
}

double NoiseFamily::tail_ratio(double x) const {
  const double v = x / scale_;
  switch (kind_) {
    case Family::Laplace: return v < 0 ? scale_ : scale_ * (2.0 * std::exp(v) - 1.0);
    case Family::Logistic: return v < 0 ? scale_ * (1.0 + std::exp(v)) : scale_ * (1.0 + std::exp(v));
    default: return scale_ * mills_ratio(v);
  }
}

double NoiseFamily::eta() const { return kind_ == Family::Gaussian ? 0.0 : scale_; }

double NoiseFamily::delta(double u) const {
  if (u == std::numeric_limits<double>::infinity()) return u;
  if (u == -std::numeric_limits<double>::infinity()) return eta();
  const double v = u / scale_;
  switch (kind_) {
    case Family::Laplace: {
      if (v <= 0) return scale_;
      const double e = std::exp(-v);
      return scale_ * (v + 0.5 * e) / (1.0 - 0.5 * e);
    }
    case Family::Logistic: {
      if (v <= 0) {
        const double r = std::exp(v);
        const double ratio = r > 1e-300 ? std::log1p(r) / r : 1.0;
        return scale_ * ratio * (1.0 + r);
      }
      return scale_ * softplus(v) * (1.0 + std::exp(-v));
    }
    default: return scale_ * reversed_hazard_shift(v);
  }
}

bool NoiseFamily::log_concave_on_grid() const {
  const double h = 0.02 * scale_;
  for (int i = -1000; i <= 1000; ++i) {
    const double x = i * h;
    const double d2 = log_pdf(x + h) - 2.0 * log_pdf(x) + log_pdf(x - h);
    if (d2 > 1e-12) return false;
  }
  return true;
}

double expect_below(const NoiseFamily& noise, double w, const std::function<double(double)>& g) {
  if (w == std::numeric_limits<double>::infinity()) w = 1e300;
  const double s = noise.scale();
  const double log_norm = noise.log_cdf(w);
  auto integrand = [&](double v) {
    const double u = w - v;
    return std::exp(noise.log_pdf(u) - log_norm) * g(u);
  };
  // Past its mode at u = min(w, 0) the truncated density decays at least as
  // fast as exp(-v/r), r = F(w)/f(w).
  const double r = std::min(noise.tail_ratio(w), s);
  const double mode = std::max(w, 0.0);
  const double brk[] = {r,          4.0 * r,         16.0 * r,        mode - 40.0 * s, mode - 12.0 * s,
                        mode - 4.0 * s, mode - s,       mode,            mode + s,        mode + 4.0 * s,
                        mode + 12.0 * s};
  const double upper = mode + 60.0 * s + 40.0 * r;
  return quad::integrate(integrand, 0.0, upper, 1e-14, 1e-13, brk).value;
}

double expect_above(const NoiseFamily& noise, double w, const std::function<double(double)>& g) {
  return expect_below(noise, -w, [&](double u) { return g(-u); });
}

}  // namespace ratbounds
