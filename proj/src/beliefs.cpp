#include "ratbounds/beliefs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ratbounds/quadrature.hpp"
#include "ratbounds/special_functions.hpp"

namespace ratbounds {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// log Phi(v) with the Gaussian exponent of the lower tail split off:
// log Phi(v) = -v^2/2 [v < 0] + tail_log_cdf(v), the remainder O(log|v|).
double tail_log_cdf(double v) {
  return v < 0.0 ? std::log(mills_ratio(v)) - kLogSqrt2Pi : log_std_normal_cdf(v);
}

// Normalised extension posterior density. Deep in the tails the three
// quadratic exponents are each huge and nearly cancel, so they are combined
// analytically around m0 = (x sl^2 + z sf^2)/sigma^2 before exponentiating.
struct ExtDensity {
  const ExtPosterior& p;
  double sign, w, m0, s, log_norm;
  explicit ExtDensity(const ExtPosterior& post) : p(post) {
    const double sigma = post.sigma();
    sign = p.h == History::Effort ? 1.0 : -1.0;
    w = sign * (p.x - p.z) / sigma;
    m0 = (p.x * p.sigma_l * p.sigma_l + p.z * p.sigma_f * p.sigma_f) / (sigma * sigma);
    s = p.sigma_f * p.sigma_l / sigma;
    log_norm = tail_log_cdf(w) + std::log(p.sigma_f) + kLogSqrt2Pi;
  }
  double operator()(double t) const {
    const double b = sign * (t - p.z) / p.sigma_l;
    double q;
    if (b < 0.0 && w < 0.0) {
      const double c = (t - m0) / s;
      q = -0.5 * c * c;
    } else {
      const double a = (t - p.x) / p.sigma_f;
      q = -0.5 * a * a - (b < 0.0 ? 0.5 * b * b : 0.0) + (w < 0.0 ? 0.5 * w * w : 0.0);
    }
    return std::exp(q + tail_log_cdf(b) - log_norm);
  }
  // The density is log-concave with curvature at least 1/sigma_f^2, so a
  // window of +-14 sigma_f around the mean holds all but e^-98 of the mass.
  std::pair<double, double> window() const {
    const double m = posterior_mean_ext(p.x, p.z, p.h, p.sigma_f, p.sigma_l);
    return {m - 14.0 * p.sigma_f, m + 14.0 * p.sigma_f};
  }
  std::vector<double> breaks() const {
    std::vector<double> b;
    for (double k : {-12.0, -4.0, -1.0, 0.0, 1.0, 4.0, 12.0}) b.push_back(p.z + k * p.sigma_l);
    const double m = posterior_mean_ext(p.x, p.z, p.h, p.sigma_f, p.sigma_l);
    for (double k : {-4.0, -1.0, 0.0, 1.0, 4.0}) b.push_back(m + k * p.sigma_f);
    return b;
  }
};

}  // namespace

double ExtPosterior::sigma() const { return std::hypot(sigma_f, sigma_l); }

double truncated_mean(double x, double z, History h, double sigma_f) {
  require_positive(sigma_f, "sigma_f");
  if (h == History::Effort) return z + sigma_f * reversed_hazard_shift((x - z) / sigma_f);
  return z - sigma_f * reversed_hazard_shift((z - x) / sigma_f);
}

double truncated_mean(double x, double z, History h, double sigma_f, const NoiseFamily& noise) {
  require_positive(sigma_f, "sigma_f");
  const double w = (x - z) / sigma_f;
  return h == History::Effort ? z + sigma_f * noise.delta(w) : z - sigma_f * noise.varsigma(w);
}

double posterior_cdf_main(double theta, const MainPosterior& p) {
  require_positive(p.sigma_f, "sigma_f");
  const double a = (p.x - theta) / p.sigma_f;
  const double w = (p.x - p.z) / p.sigma_f;
  if (p.h == History::Effort) {
    if (theta <= p.z) return 0.0;
    return -std::expm1(p.noise.log_cdf(a) - p.noise.log_cdf(w));
  }
  if (theta > p.z) return 1.0;
  return std::exp(p.noise.log_cdf(-a) - p.noise.log_cdf(-w));
}

double posterior_cdf_ext(double theta, const ExtPosterior& p) {
  require_positive(p.sigma_f, "sigma_f");
  require_positive(p.sigma_l, "sigma_l");
  if (theta == -INFINITY) return 0.0;
  if (theta == INFINITY) return 1.0;
  ExtDensity dens(p);
  auto [lo, hi] = dens.window();
  if (theta <= lo) return 0.0;
  if (theta >= hi) return 1.0;
  const auto brk = dens.breaks();
  const double v = quad::integrate(dens, lo, theta, 1e-14, 1e-12, brk).value;
  return std::clamp(v, 0.0, 1.0);
}

double posterior_mean_ext(double x, double z, History h, double sigma_f, double sigma_l) {
  require_positive(sigma_f, "sigma_f");
  require_positive(sigma_l, "sigma_l");
  const double sigma = std::hypot(sigma_f, sigma_l);
  const double k = sigma_f * sigma_f / sigma;
  // x + k lambda(y) rewritten as m0 + k (y + lambda(y)); the first form
  // cancels catastrophically far in the tail where lambda(y) ~ -y.
  const double m0 = (x * sigma_l * sigma_l + z * sigma_f * sigma_f) / (sigma * sigma);
  if (h == History::Effort) return m0 + k * reversed_hazard_shift((x - z) / sigma);
  return m0 - k * reversed_hazard_shift((z - x) / sigma);
}

double rank_belief_main(double x, double z, History h, double sigma_f) {
  require_positive(sigma_f, "sigma_f");
  return 0.5 * (std_normal_cdf((x - z) / sigma_f) + chi_n(h));
}

double rank_belief_main(double x, double z, History h, double sigma_f, const NoiseFamily& noise) {
  require_positive(sigma_f, "sigma_f");
  return 0.5 * (noise.cdf((x - z) / sigma_f) + chi_n(h));
}

double rank_belief_ext(double x, double z, History h, double sigma_f, double sigma_l) {
  require_positive(sigma_f, "sigma_f");
  require_positive(sigma_l, "sigma_l");
  const double sigma = std::hypot(sigma_f, sigma_l);
  const double alpha = sigma_f / std::sqrt(2.0 * sigma_l * sigma_l + sigma_f * sigma_f);
  const double w = (x - z) / sigma;
  return h == History::Effort ? s_tilde(w, alpha) : 1.0 - s_tilde(-w, alpha);
}

double posterior_expect_main(const MainPosterior& p, const std::function<double(double)>& g) {
  require_positive(p.sigma_f, "sigma_f");
  const double w = (p.x - p.z) / p.sigma_f;
  // theta = x - sigma_f u, with u <= w after Effort and u > w after NoEffort.
  auto in_u = [&](double u) { return g(p.x - p.sigma_f * u); };
  return p.h == History::Effort ? expect_below(p.noise, w, in_u) : expect_above(p.noise, w, in_u);
}

double posterior_expect_ext(const ExtPosterior& p, const std::function<double(double)>& g) {
  require_positive(p.sigma_f, "sigma_f");
  require_positive(p.sigma_l, "sigma_l");
  ExtDensity dens(p);
  auto [lo, hi] = dens.window();
  const auto brk = dens.breaks();
  return quad::integrate([&](double t) { return dens(t) * g(t); }, lo, hi, 1e-14, 1e-12, brk).value;
}

}  // namespace ratbounds
