#include "ratbounds/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ratbounds/quadrature.hpp"
#include "ratbounds/roots.hpp"
#include "ratbounds/special_functions.hpp"

namespace ratbounds {

namespace {

// Noise CDF evaluated at (t - a)/s with infinite t handled exactly.
double cdf_at(const NoiseFamily& noise, const ExtReal& t, double a, double s) {
  if (t.is_neg_inf()) return 0.0;
  if (t.is_pos_inf()) return 1.0;
  return noise.cdf((t.value() - a) / s);
}

}  // namespace

const char* model_name(Model m) {
  switch (m) {
    case Model::Extension: return "extension";
    case Model::LogConcave: return "logconcave";
    default: return "main";
  }
}

double ModelParams::sigma() const { return std::hypot(sigma_f, sigma_l); }

Model ModelParams::model() const {
  if (sigma_l > 0.0) return Model::Extension;
  return noise.is_gaussian() ? Model::Main : Model::LogConcave;
}

void ModelParams::validate() const {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (!(sigma_f > 0.0) || !std::isfinite(sigma_f)) throw std::invalid_argument("sigma_f must be positive");
  if (!(sigma_l >= 0.0) || !std::isfinite(sigma_l)) throw std::invalid_argument("sigma_l must be non-negative");
  if (sigma_l > 0.0 && !noise.is_gaussian())
    throw std::invalid_argument("a noisy leader is only supported with Gaussian noise");
}

double leader_payoff(double theta, const ExtReal& x_e, const ModelParams& p) {
  const double s = p.model() == Model::Extension ? p.sigma() : p.sigma_f;
  return theta - cdf_at(p.noise, x_e, theta, s);
}

double follower_payoff(double x, double z, const ExtReal& x_h, History h, const ModelParams& p) {
  const double c = p.coord();
  const double penalty = chi_n(h) / p.n;
  if (p.model() == Model::Extension) {
    const double mean = posterior_mean_ext(x, z, h, p.sigma_f, p.sigma_l);
    if (x_h.is_neg_inf()) return mean - penalty;
    if (x_h.is_pos_inf()) return mean - c - penalty;
    const double xh = x_h.value();
    const double sf = p.sigma_f;
    const ExtPosterior post{x, z, h, p.sigma_f, p.sigma_l};
    return mean - c * posterior_expect_ext(post, [=](double t) { return std_normal_cdf((xh - t) / sf); }) - penalty;
  }
  const double mean = truncated_mean(x, z, h, p.sigma_f, p.noise);
  if (x_h.is_neg_inf()) return mean - penalty;
  if (x_h.is_pos_inf()) return mean - c - penalty;
  const double xh = x_h.value();
  const double sf = p.sigma_f;
  const NoiseFamily& noise = p.noise;
  const MainPosterior post{x, z, h, p.sigma_f, p.noise};
  return mean - c * posterior_expect_main(post, [&](double t) { return noise.cdf((xh - t) / sf); }) - penalty;
}

double follower_fixed_point_residual(double x_h, double z, History h, const ModelParams& p) {
  const double c = p.coord();
  const double penalty = chi_n(h) / p.n;
  if (p.model() == Model::Extension)
    return posterior_mean_ext(x_h, z, h, p.sigma_f, p.sigma_l) -
           c * rank_belief_ext(x_h, z, h, p.sigma_f, p.sigma_l) - penalty;
  return truncated_mean(x_h, z, h, p.sigma_f, p.noise) - c * rank_belief_main(x_h, z, h, p.sigma_f, p.noise) -
         penalty;
}

double follower_payoff_limit(double z, const ExtReal& x_h, History h, const ModelParams& p) {
  if (p.model() == Model::Extension) return h == History::Effort ? -INFINITY : INFINITY;
  const double eta = p.noise.eta();
  const double tail = p.sigma_f * eta;
  // Far from z the truncated posterior does not collapse onto z when the
  // noise tail is exponential: theta - z tends to sigma_f * eta * V with
  // V ~ Exp(1), so the spillover is averaged over V.
  double spill = cdf_at(p.noise, x_h, z, p.sigma_f);
  if (eta > 0.0 && x_h.is_finite()) {
    const double w = (x_h.value() - z) / p.sigma_f;
    const double sgn = h == History::Effort ? -1.0 : 1.0;
    spill = quad::integrate([&](double v) { return std::exp(-v) * p.noise.cdf(w + sgn * eta * v); }, 0.0, 45.0,
                            1e-15, 1e-13)
                .value;
  }
  spill *= p.coord();
  if (h == History::Effort) return z + tail - spill;
  return z - tail - 1.0 / p.n - spill;
}

double br_leader(const ExtReal& x_e, const ModelParams& p) {
  if (x_e.is_neg_inf()) return 0.0;
  if (x_e.is_pos_inf()) return 1.0;
  auto f = [&](double t) { return leader_payoff(t, x_e, p); };
  return bracketed_root(f, 0.0, 1.0, f(0.0), f(1.0));
}

ExtReal br_follower(double z, const ExtReal& x_prev, History h, const ModelParams& p) {
  const double lim = follower_payoff_limit(z, x_prev, h, p);
  // One-sided dominance: with no sign change the whole type space is
  // dominated into one action.
  if (h == History::Effort && lim >= 0.0) return ExtReal::neg_inf();
  if (h == History::NoEffort && lim <= 0.0) return ExtReal::pos_inf();

  auto f = [&](double x) { return follower_payoff(x, z, x_prev, h, p); };
  const double x0 = std::clamp(x_prev.is_finite() ? x_prev.value() : z, -kDivergence, kDivergence);
  double lo = x0, hi = x0;
  double f_lo = f(x0), f_hi = f_lo;
  double step = std::max(p.sigma_f, 1e-3);
  while (f_lo > 0.0) {
    if (lo <= -kDivergence) return ExtReal::neg_inf();
    hi = lo;
    f_hi = f_lo;
    lo = std::max(lo - step, -kDivergence);
    step *= 2.0;
    f_lo = f(lo);
  }
  step = std::max(p.sigma_f, 1e-3);
  while (f_hi < 0.0) {
    if (hi >= kDivergence) return ExtReal::pos_inf();
    lo = hi;
    f_lo = f_hi;
    hi = std::min(hi + step, kDivergence);
    step *= 2.0;
    f_hi = f(hi);
  }
  const double root = bracketed_root(f, lo, hi, f_lo, f_hi);
  if (root <= -kDivergence) return ExtReal::neg_inf();
  if (root >= kDivergence) return ExtReal::pos_inf();
  return ExtReal(root);
}

}  // namespace ratbounds
