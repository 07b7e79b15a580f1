#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ratbounds/beliefs.hpp"
#include "ratbounds/ext_real.hpp"
#include "ratbounds/payoffs.hpp"

namespace ratbounds {

struct McConfig {
  std::int64_t n_samples = 1'000'000;
  std::uint64_t seed = 1;
  bool antithetic = true;
  // Worker threads over sample blocks; results do not depend on it.
  int threads = 1;

  void validate() const;
};

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  // Kish effective sample size; equals the draw count for unweighted runs.
  double ess = 0.0;

  // |mean - value| <= k * se
  bool brackets(double value, double k = 3.0) const;
};

class McError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// SplitMix64 step; block b of a run is seeded with the (b+1)-th output of a
// SplitMix64 stream started at the run seed.
std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block);
inline constexpr std::int64_t kMcBlockSize = 1 << 16;

// E[g(theta) | x, h] under the follower's posterior. The main model draws
// theta from the truncated posterior by inverse CDF; the extension draws
// theta ~ N(x, sigma_f^2) and reweights by the leader-signal likelihood
// Phi(+-(theta - z)/sigma_l), throwing McError if the effective sample size
// falls below 100.
McEstimate mc_posterior_expect(double x, double z, History h, const ModelParams& p, const McConfig& cfg,
                               const std::function<double(double)>& g);

McEstimate mc_posterior_mean(double x, double z, History h, const ModelParams& p, const McConfig& cfg);
// Probability that another follower's signal is below x.
McEstimate mc_rank_belief(double x, double z, History h, const ModelParams& p, const McConfig& cfg);
McEstimate mc_follower_payoff(double x, double z, double x_h, History h, const ModelParams& p, const McConfig& cfg);
// Leader payoff to Effort at theta (main) or signal x_l (extension) against
// followers using x_e after Effort, by simulating one follower's signal.
McEstimate mc_leader_payoff(double theta_or_signal, double x_e, const ModelParams& p, const McConfig& cfg);

// A monotone strategy profile: the leader exerts effort iff its signal
// (theta itself when sigma_l = 0) exceeds `leader`; followers exert effort
// iff their signal exceeds x_e or x_n depending on the leader's action.
struct Profile {
  ExtReal leader = ExtReal(0.0);
  ExtReal x_e = ExtReal::neg_inf();
  ExtReal x_n = ExtReal::pos_inf();
};

struct OutcomeRow {
  double theta = 0.0;
  McEstimate leader_payoff;
  McEstimate follower_payoff;  // average over followers
  double leader_effort = 0.0;
  double follower_effort = 0.0;
};

// Forward simulation of the game at each theta: draw signals, play the
// profile, pay u = theta + A - 1 to each player who exerts effort, where A
// is the share of the other players exerting effort (shares are out of n).
std::vector<OutcomeRow> mc_game_outcome(const Profile& profile, const std::vector<double>& theta_grid,
                                        const ModelParams& p, const McConfig& cfg);

}  // namespace ratbounds
