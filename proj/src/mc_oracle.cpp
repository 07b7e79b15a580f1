#include "ratbounds/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "ratbounds/special_functions.hpp"

namespace ratbounds {

namespace {

constexpr double kMinEss = 100.0;

// Uniform on the open interval (0, 1) from the top 53 bits; 1 - u is exact.
double open_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

// Sums for a self-normalised ratio over sampling units; an antithetic pair
// is one unit. Unweighted runs set every weight to 1.
struct Sums {
  double units = 0.0, w = 0.0, g = 0.0, ww = 0.0, gg = 0.0, wg = 0.0;
  double w_draw = 0.0, ww_draw = 0.0;

  void add(double w_unit, double g_unit) {
    units += 1.0;
    w += w_unit;
    g += g_unit;
    ww += w_unit * w_unit;
    gg += g_unit * g_unit;
    wg += w_unit * g_unit;
  }
  void add_draw_weight(double wd) {
    w_draw += wd;
    ww_draw += wd * wd;
  }
  void merge(const Sums& o) {
    units += o.units;
    w += o.w;
    g += o.g;
    ww += o.ww;
    gg += o.gg;
    wg += o.wg;
    w_draw += o.w_draw;
    ww_draw += o.ww_draw;
  }
  McEstimate finish() const {
    McEstimate e;
    if (!(w > 0.0)) throw McError("all importance weights vanished");
    e.mean = g / w;
    // Delta-method variance of the ratio estimator over units.
    const double resid = std::max(gg - 2.0 * e.mean * wg + e.mean * e.mean * ww, 0.0);
    const double mean_w = w / units;
    e.se = std::sqrt(resid / (units * (units - 1.0))) / mean_w;
    e.ess = ww_draw > 0.0 ? w_draw * w_draw / ww_draw : 0.0;
    return e;
  }
};

// Runs `block(rng, draws, sums)` over fixed-size blocks and merges in block
// order so the result does not depend on the thread count.
template <class Acc = Sums, class Block>
Acc run_blocks(const McConfig& cfg, Block&& block) {
  cfg.validate();
  const std::int64_t nblocks = (cfg.n_samples + kMcBlockSize - 1) / kMcBlockSize;
  std::vector<Acc> parts(static_cast<std::size_t>(nblocks));
  auto work = [&](std::int64_t b) {
    std::mt19937_64 rng(block_seed(cfg.seed, static_cast<std::uint64_t>(b)));
    const std::int64_t draws = std::min(kMcBlockSize, cfg.n_samples - b * kMcBlockSize);
    block(rng, draws, parts[static_cast<std::size_t>(b)]);
  };
  const int threads = std::clamp<int>(cfg.threads, 1, static_cast<int>(std::max<std::int64_t>(nblocks, 1)));
  if (threads == 1) {
    for (std::int64_t b = 0; b < nblocks; ++b) work(b);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::int64_t b = t; b < nblocks; b += threads) work(b);
      });
    for (auto& th : pool) th.join();
  }
  Acc total;
  for (const auto& s : parts) total.merge(s);
  return total;
}

// Plain means of four per-draw quantities.
struct Outcome {
  double count = 0.0;
  double sum[4] = {0, 0, 0, 0};
  double sq[4] = {0, 0, 0, 0};

  void add(double a, double b, double c, double d) {
    const double v[4] = {a, b, c, d};
    count += 1.0;
    for (int k = 0; k < 4; ++k) {
      sum[k] += v[k];
      sq[k] += v[k] * v[k];
    }
  }
  void merge(const Outcome& o) {
    count += o.count;
    for (int k = 0; k < 4; ++k) {
      sum[k] += o.sum[k];
      sq[k] += o.sq[k];
    }
  }
  McEstimate estimate(int k) const {
    McEstimate e;
    e.mean = sum[k] / count;
    const double var = std::max(sq[k] / count - e.mean * e.mean, 0.0) * count / (count - 1.0);
    e.se = std::sqrt(var / count);
    e.ess = count;
    return e;
  }
};

// theta = x - sigma_f u with u <= w (Effort) or u > w (NoEffort), u drawn
// by inverse CDF of the truncated noise law.
McEstimate main_expect(double x, double z, History h, const ModelParams& p, const McConfig& cfg,
                       const std::function<double(double)>& g) {
  const NoiseFamily& F = p.noise;
  const double w = (x - z) / p.sigma_f;
  const bool effort = h == History::Effort;
  const double log_mass = F.log_cdf(effort ? w : -w);
  auto draw = [&](double uni) {
    const double q = F.quantile_from_log(std::log(uni) + log_mass);
    const double u = effort ? std::min(q, w) : std::max(-q, w);
    return g(x - p.sigma_f * u);
  };
  Sums s = run_blocks(cfg, [&](std::mt19937_64& rng, std::int64_t draws, Sums& out) {
    if (cfg.antithetic) {
      for (std::int64_t i = 0; i + 1 < draws; i += 2) {
        const double uni = open_uniform(rng);
        out.add(1.0, 0.5 * (draw(uni) + draw(1.0 - uni)));
        out.add_draw_weight(1.0);
        out.add_draw_weight(1.0);
      }
    } else {
      for (std::int64_t i = 0; i < draws; ++i) {
        out.add(1.0, draw(open_uniform(rng)));
        out.add_draw_weight(1.0);
      }
    }
  });
  return s.finish();
}

McEstimate ext_expect(double x, double z, History h, const ModelParams& p, const McConfig& cfg,
                      const std::function<double(double)>& g) {
  const double sign = h == History::Effort ? 1.0 : -1.0;
  auto weight = [&](double theta) { return std_normal_cdf(sign * (theta - z) / p.sigma_l); };
  Sums s = run_blocks(cfg, [&](std::mt19937_64& rng, std::int64_t draws, Sums& out) {
    const std::int64_t step = cfg.antithetic ? 2 : 1;
    for (std::int64_t i = 0; i + step - 1 < draws; i += step) {
      const double e = std_normal_quantile(open_uniform(rng));
      double wu = 0.0, gu = 0.0;
      for (int k = 0; k < step; ++k) {
        const double theta = x + p.sigma_f * (k == 0 ? e : -e);
        const double wt = weight(theta);
        wu += wt;
        gu += wt * g(theta);
        out.add_draw_weight(wt);
      }
      out.add(wu, gu);
    }
  });
  McEstimate e = s.finish();
  if (e.ess < kMinEss) throw McError("effective sample size " + std::to_string(e.ess) + " below 100");
  return e;
}

}  // namespace

void McConfig::validate() const {
  if (n_samples < 10'000) throw std::invalid_argument("n_samples must be at least 10000");
  if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

// The floor covers estimators that are exact by construction (se = 0).
bool McEstimate::brackets(double value, double k) const {
  return std::fabs(mean - value) <= k * se + 1e-12 * (1.0 + std::fabs(value));
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  // SplitMix64 is a counter-based generator: jump straight to output b+1.
  std::uint64_t state = seed + block * 0x9e3779b97f4a7c15ULL;
  return splitmix64(state);
}

McEstimate mc_posterior_expect(double x, double z, History h, const ModelParams& p, const McConfig& cfg,
                               const std::function<double(double)>& g) {
  p.validate();
  if (!std::isfinite(x) || !std::isfinite(z)) throw std::invalid_argument("x and z must be finite");
  return p.model() == Model::Extension ? ext_expect(x, z, h, p, cfg, g) : main_expect(x, z, h, p, cfg, g);
}

McEstimate mc_posterior_mean(double x, double z, History h, const ModelParams& p, const McConfig& cfg) {
  return mc_posterior_expect(x, z, h, p, cfg, [](double t) { return t; });
}

McEstimate mc_rank_belief(double x, double z, History h, const ModelParams& p, const McConfig& cfg) {
  const double sf = p.sigma_f;
  const NoiseFamily& F = p.noise;
  return mc_posterior_expect(x, z, h, p, cfg, [&](double t) { return F.cdf((x - t) / sf); });
}

McEstimate mc_follower_payoff(double x, double z, double x_h, History h, const ModelParams& p,
                              const McConfig& cfg) {
  if (!std::isfinite(x_h)) throw std::invalid_argument("x_h must be finite");
  const double c = p.coord();
  const double penalty = chi_n(h) / p.n;
  const double sf = p.sigma_f;
  const NoiseFamily& F = p.noise;
  return mc_posterior_expect(x, z, h, p, cfg, [&](double t) { return t - c * F.cdf((x_h - t) / sf) - penalty; });
}

McEstimate mc_leader_payoff(double theta_or_signal, double x_e, const ModelParams& p, const McConfig& cfg) {
  p.validate();
  const bool ext = p.model() == Model::Extension;
  const double sf = p.sigma_f, sl = p.sigma_l;
  Sums s = run_blocks(cfg, [&](std::mt19937_64& rng, std::int64_t draws, Sums& out) {
    for (std::int64_t i = 0; i < draws; ++i) {
      // Extension: theta | x_l is N(x_l, sigma_l^2) under the flat prior.
      const double theta =
          ext ? theta_or_signal + sl * std_normal_quantile(open_uniform(rng)) : theta_or_signal;
      const double signal = theta + sf * p.noise.quantile(open_uniform(rng));
      out.add(1.0, theta - (signal <= x_e ? 1.0 : 0.0));
      out.add_draw_weight(1.0);
    }
  });
  return s.finish();
}

std::vector<OutcomeRow> mc_game_outcome(const Profile& profile, const std::vector<double>& theta_grid,
                                        const ModelParams& p, const McConfig& cfg) {
  p.validate();
  const bool ext = p.model() == Model::Extension;
  const int n = p.n;
  const double leader_cut = profile.leader.as_double();
  std::vector<OutcomeRow> rows;
  for (std::size_t row = 0; row < theta_grid.size(); ++row) {
    const double theta = theta_grid[row];
    McConfig rc = cfg;
    rc.seed = block_seed(cfg.seed ^ 0x5bd1e995ULL, row);
    const Outcome acc = run_blocks<Outcome>(rc, [&](std::mt19937_64& rng, std::int64_t draws, Outcome& out) {
      for (std::int64_t i = 0; i < draws; ++i) {
        const double x_l = ext ? theta + p.sigma_l * std_normal_quantile(open_uniform(rng)) : theta;
        const bool lead = x_l > leader_cut;
        const double cut = (lead ? profile.x_e : profile.x_n).as_double();
        int followers = 0;
        for (int j = 0; j < n; ++j)
          if (theta + p.sigma_f * p.noise.quantile(open_uniform(rng)) > cut) ++followers;
        const double pay_l = lead ? theta + static_cast<double>(followers) / n - 1.0 : 0.0;
        // An effort-taking follower sees the leader and the other
        // effort-taking followers; the rest earn 0.
        const double pay_each = theta + ((lead ? 1.0 : 0.0) + followers - 1.0) / n - 1.0;
        out.add(pay_l, followers * pay_each / n, lead ? 1.0 : 0.0, static_cast<double>(followers) / n);
      }
    });
    OutcomeRow r;
    r.theta = theta;
    r.leader_payoff = acc.estimate(0);
    r.follower_payoff = acc.estimate(1);
    r.leader_effort = acc.sum[2] / acc.count;
    r.follower_effort = acc.sum[3] / acc.count;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace ratbounds
