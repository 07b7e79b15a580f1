#pragma once

#include <functional>

#include "ratbounds/noise_models.hpp"

namespace ratbounds {

// The first-stage action a follower observed.
enum class History { Effort, NoEffort };

inline double chi_n(History h) { return h == History::NoEffort ? 1.0 : 0.0; }
inline const char* history_name(History h) { return h == History::Effort ? "effort" : "no_effort"; }

// Posterior over theta for a follower with signal x who saw the perfectly
// informed leader act with cutoff z: the noise posterior x - sigma_f*eps
// truncated to (z, inf) after Effort and (-inf, z] after NoEffort.
struct MainPosterior {
  double x = 0.0;
  double z = 0.0;
  History h = History::Effort;
  double sigma_f = 1.0;
  NoiseFamily noise{};
};

// Posterior when the leader acts on her own signal x_L = theta + sigma_l*eps_L
// with cutoff z. Gaussian noise only.
struct ExtPosterior {
  double x = 0.0;
  double z = 0.0;
  History h = History::Effort;
  double sigma_f = 1.0;
  double sigma_l = 1.0;
  double sigma() const;
};

double truncated_mean(double x, double z, History h, double sigma_f);
double truncated_mean(double x, double z, History h, double sigma_f, const NoiseFamily& noise);

double posterior_cdf_main(double theta, const MainPosterior& post);
double posterior_cdf_ext(double theta, const ExtPosterior& post);

double posterior_mean_ext(double x, double z, History h, double sigma_f, double sigma_l);

// Pr(x_k <= x | x_j = x, history) for another follower k.
double rank_belief_main(double x, double z, History h, double sigma_f);
double rank_belief_main(double x, double z, History h, double sigma_f, const NoiseFamily& noise);
double rank_belief_ext(double x, double z, History h, double sigma_f, double sigma_l);

// E[g(theta)] under a posterior, by quadrature.
double posterior_expect_main(const MainPosterior& post, const std::function<double(double)>& g);
double posterior_expect_ext(const ExtPosterior& post, const std::function<double(double)>& g);

}  // namespace ratbounds
