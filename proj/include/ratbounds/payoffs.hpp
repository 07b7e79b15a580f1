#pragma once

#include "ratbounds/beliefs.hpp"
#include "ratbounds/ext_real.hpp"
#include "ratbounds/noise_models.hpp"

namespace ratbounds {

enum class Model { Main, Extension, LogConcave };
const char* model_name(Model m);

// sigma_l = 0 is the perfectly informed leader; sigma_l > 0 the noisy-leader
// extension (Gaussian only). A non-Gaussian family with sigma_l = 0 selects
// the log-concave generalisation.
struct ModelParams {
  int n = 2;
  double sigma_f = 1.0;
  double sigma_l = 0.0;
  NoiseFamily noise{};

  double sigma() const;
  Model model() const;
  double coord() const { return (n - 1.0) / n; }
  void validate() const;
};

// Thresholds beyond this magnitude are read as divergence to infinity.
inline constexpr double kDivergence = 1e6;

// theta - F((x_e - theta)/s): s = sigma_f for a perfectly informed leader,
// s = sigma for the extension (argument is then the leader's signal).
double leader_payoff(double theta, const ExtReal& x_e, const ModelParams& p);

// Expected payoff to Effort for a follower with signal x after history h,
// when the leader used cutoff z and the other followers use cutoff x_h.
double follower_payoff(double x, double z, const ExtReal& x_h, History h, const ModelParams& p);

// Closed form of follower_payoff at x = x_h: posterior mean minus
// (n-1)/n times the rank belief, minus 1/n after NoEffort.
double follower_fixed_point_residual(double x_h, double z, History h, const ModelParams& p);

// Limits of follower_payoff as x -> -inf (Effort) or x -> +inf (NoEffort);
// the other limit is infinite. The extension has both limits infinite and
// returns -inf / +inf here.
double follower_payoff_limit(double z, const ExtReal& x_h, History h, const ModelParams& p);

double br_leader(const ExtReal& x_e, const ModelParams& p);
ExtReal br_follower(double z, const ExtReal& x_prev, History h, const ModelParams& p);

}  // namespace ratbounds
