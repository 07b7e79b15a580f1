#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "ratbounds/beliefs.hpp"
#include "ratbounds/kernels.hpp"
#include "ratbounds/mc_oracle.hpp"
#include "ratbounds/noise_models.hpp"
#include "ratbounds/payoffs.hpp"
#include "ratbounds/rationalizability.hpp"
#include "ratbounds/special_functions.hpp"

namespace ratbounds::cli {

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Check {
  std::string name;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ModelParams main_params(int n, double sigma_f) {
  ModelParams p;
  p.n = n;
  p.sigma_f = sigma_f;
  return p;
}

std::vector<Check> analytic_checks(unsigned long long seed) {
  std::vector<Check> c;

  c.push_back({"owens_t identities", [] {
                 double worst = 0.0;
                 for (double y : {0.0, 0.3, 1.0, 2.5, 6.0}) worst = std::max(worst, std::fabs(owens_t(y, 0.0)));
                 for (double a : {0.1, 0.5, 1.0, 3.0, 20.0})
                   worst = std::max(worst, std::fabs(owens_t(0.0, a) - std::atan(a) / (2.0 * kPi)));
                 for (double y : {0.2, 1.3})
                   for (double a : {0.4, 2.0}) {
                     worst = std::max(worst, std::fabs(owens_t(-y, a) - owens_t(y, a)));
                     worst = std::max(worst, std::fabs(owens_t(y, -a) + owens_t(y, a)));
                   }
                 return Outcome{worst < 1e-14, fmt("max deviation %.2e", worst)};
               }});

  c.push_back({"s_tilde limits", [] {
                 double worst = 0.0;
                 // S~(y, nu) ~ Phi(nu y) as y -> -inf, so the left probe scales with 1/nu.
                 for (double nu : {0.1, 0.577, 1.0, 5.0}) {
                   worst = std::max(worst, std::fabs(s_tilde(-80.0 / nu, nu)));
                   worst = std::max(worst, std::fabs(s_tilde(40.0, nu) - 0.5));
                 }
                 return Outcome{worst < 1e-10, fmt("max deviation %.2e", worst)};
               }});

  c.push_back({"rank belief total probability", [] {
                 double worst = 0.0;
                 for (double x : {-2.0, -0.3, 0.0, 0.7, 3.0})
                   for (double sl : {0.0, 0.2, 1.5}) {
                     const double sf = 0.8, z = 0.25;
                     double pe, re, rn;
                     if (sl == 0.0) {
                       pe = std_normal_cdf((x - z) / sf);
                       re = rank_belief_main(x, z, History::Effort, sf);
                       rn = rank_belief_main(x, z, History::NoEffort, sf);
                     } else {
                       pe = std_normal_cdf((x - z) / std::hypot(sf, sl));
                       re = rank_belief_ext(x, z, History::Effort, sf, sl);
                       rn = rank_belief_ext(x, z, History::NoEffort, sf, sl);
                     }
                     worst = std::max(worst, std::fabs(pe * re + (1.0 - pe) * rn - 0.5));
                   }
                 return Outcome{worst < 1e-10, fmt("max deviation %.2e", worst)};
               }});

  c.push_back({"reversed hazard derivative", [] {
                 double worst = 0.0;
                 for (double x = -30.0; x <= 10.0; x += 0.37) {
                   const double h = 1e-5 * std::max(1.0, std::fabs(x));
                   const double fd = (reversed_hazard(x + h) - reversed_hazard(x - h)) / (2.0 * h);
                   const double lam = reversed_hazard(x);
                   worst = std::max(worst, std::fabs(fd + lam * (x + lam)));
                   worst = std::max(worst, std::fabs(reversed_hazard_deriv(x) + lam * reversed_hazard_shift(x)));
                 }
                 return Outcome{worst < 1e-8, fmt("max deviation %.2e", worst)};
               }});

  c.push_back({"simd kernels match scalar", [] {
                 using namespace kernels;
                 if (!isa_available(Isa::Avx2)) return Outcome{true, "avx2 unavailable, scalar only"};
                 std::vector<double> x;
                 for (double v = -36.0; v <= 36.0; v += 0.0137) x.push_back(v);
                 std::vector<double> a(x.size()), b(x.size());
                 double worst = 0.0;
                 // Both kernels carry O((1 + x^2) ulp) error from the exp(-x^2/2) split.
                 auto cmp = [&] {
                   for (std::size_t i = 0; i < x.size(); ++i)
                     if (std::fabs(a[i]) > 1e-300)
                       worst = std::max(worst, std::fabs(a[i] - b[i]) / std::fabs(a[i]) / (1.0 + x[i] * x[i]));
                 };
                 table(Isa::Scalar).reversed_hazard(x.data(), a.data(), x.size());
                 table(Isa::Avx2).reversed_hazard(x.data(), b.data(), x.size());
                 cmp();
                 table(Isa::Scalar).normal_cdf_affine(x.data(), a.data(), x.size(), 0.1, 0.9);
                 table(Isa::Avx2).normal_cdf_affine(x.data(), b.data(), x.size(), 0.1, 0.9);
                 cmp();
                 return Outcome{worst < 8.0 * 0x1p-52, fmt("max relative gap per (1+x^2) %.2e", worst)};
               }});

  c.push_back({"noise families log-concave", [] {
                 for (const auto& f : {NoiseFamily::gaussian(), NoiseFamily::laplace(), NoiseFamily::logistic()})
                   if (!f.log_concave_on_grid()) return Outcome{false, f.name()};
                 return Outcome{true, "gaussian laplace logistic"};
               }});

  c.push_back({"uniqueness dichotomy", [] {
                 std::ostringstream d;
                 bool ok = true;
                 for (int n : {2, 4, 8}) {
                   const double hat = critical_sigma_f(n);
                   const SolveReport above = iterate_bounds_main(main_params(n, 1.01 * hat), 100000, 1e-9);
                   const SolveReport below = iterate_bounds_main(main_params(n, 0.99 * hat), 100000, 1e-9);
                   const bool exact = above.limits.theta_hi.as_double() == 0.0 && above.limits.x_e_hi.is_neg_inf() &&
                                      above.limits.x_n_lo.is_pos_inf();
                   ok = ok && above.unique && exact && !below.unique;
                   d << "n=" << n << (above.unique && !below.unique ? " ok " : " bad ");
                 }
                 return Outcome{ok, d.str()};
               }});

  c.push_back({"critical noise bound and monotonicity", [] {
                 double prev = 0.0, margin = 1e300;
                 bool ok = true;
                 for (int n = 2; n <= 10; ++n) {
                   const double hat = critical_sigma_f(n);
                   margin = std::min(margin, hat - critical_sigma_f_lower_bound(n));
                   ok = ok && hat > prev;
                   prev = hat;
                 }
                 return Outcome{ok && margin > 1e-6, fmt("min margin over bound %.3e", margin)};
               }});

  c.push_back({"iteration agrees with limit solver", [seed] {
                 std::mt19937_64 rng(seed);
                 std::uniform_int_distribution<int> nd(2, 8);
                 std::uniform_real_distribution<double> sd(std::log(0.02), std::log(0.6));
                 int bad = 0;
                 for (int i = 0; i < 5; ++i) {
                   const ModelParams p = main_params(nd(rng), std::exp(sd(rng)));
                   const SolveReport a = iterate_bounds_main(p, 100000, 1e-10);
                   const SolveReport b = solve_limits_main(p, 1e-10, false);
                   for (int k = 0; k < BoundsState::kSize; ++k)
                     if (!same_within(a.limits[k], b.limits[k], 1e-6)) ++bad;
                 }
                 return Outcome{bad == 0, fmt("%.0f mismatching components", bad)};
               }});

  c.push_back({"effort uniqueness implies x_n_lo = +inf", [] {
                 bool ok = true;
                 for (double s : {0.05, 0.2, 0.3, 1.0}) {
                   const SolveReport r = iterate_bounds_main(main_params(4, s), 100000, 1e-9);
                   if (r.limits.x_e_hi.is_neg_inf() && !r.limits.x_n_lo.is_pos_inf()) ok = false;
                   if (!(r.limits.theta_hi.as_double() < 1.0)) ok = false;
                 }
                 return Outcome{ok, "sigma_f in {0.05, 0.2, 0.3, 1}"};
               }});

  // With the leader cutoff exactly 0 the noisy-leader Effort cutoff is finite
  // near -sigma_f sigma / sigma_l, so an infinite perfect-leader bound may show
  // up as a cutoff of that order instead of an infinity.
  c.push_back({"noisy leader limit approaches perfect leader", [] {
                 double worst = 0.0;
                 bool flags = true;
                 const double hat = critical_sigma_f(4);
                 const double sl = 1e-6;
                 for (double k : {0.5, 2.0}) {
                   ModelParams p = main_params(4, k * hat);
                   const SolveReport m = iterate_bounds_main(p, 100000, 1e-9);
                   p.sigma_l = sl;
                   const SolveReport e = iterate_bounds_ext(p, 100000, 1e-9);
                   const double scale = 0.5 * p.sigma_f * p.sigma() / sl;
                   for (int i = 0; i < BoundsState::kSize; ++i) {
                     const ExtReal& a = m.limits[i];
                     const ExtReal& b = e.limits[i];
                     if (a.is_finite()) {
                       if (!b.is_finite()) flags = false;
                       else worst = std::max(worst, std::fabs(a.value() - b.value()));
                     } else if (b.kind() != a.kind() &&
                                !(b.is_finite() && std::signbit(b.value()) == a.is_neg_inf() &&
                                  std::fabs(b.value()) >= scale)) {
                       flags = false;
                     }
                   }
                 }
                 return Outcome{flags && worst < 1e-3, fmt("max gap on finite components %.2e", worst)};
               }});

  c.push_back({"monotone equilibrium", [] {
                 double worst = 1e300;
                 for (auto [n, s] : {std::pair{2, 1.0}, {10, 0.01}, {4, 0.3}}) {
                   const MonotoneEquilibriumReport r = verify_monotone_equilibrium(main_params(n, s));
                   if (!r.passed()) return Outcome{false, r.counterexample};
                   worst = std::min(worst, r.b4_min);
                 }
                 return Outcome{true, fmt("min interior residual %.4g", worst)};
               }});

  c.push_back({"log-concave collapse", [] {
                 ModelParams p = main_params(4, 0.75);
                 p.noise = NoiseFamily::laplace();
                 const SolveReport r = iterate_bounds_logconcave(p, 500, 1e-9);
                 const BoundsState& s2 = r.trace.at(2);
                 const bool ok = r.unique && s2.theta_lo.as_double() == 0.0 && s2.theta_hi.as_double() == 0.0 &&
                                 s2.x_e_lo.is_neg_inf() && s2.x_e_hi.is_neg_inf() && s2.x_n_lo.is_pos_inf() &&
                                 s2.x_n_hi.is_pos_inf();
                 return Outcome{ok, fmt("iota round %.0f", r.iota_round)};
               }});

  c.push_back({"risk-dominance limit", [] {
                 const SolveReport r = solve_limits_main(main_params(4, 1e-3), 1e-9, false);
                 const double th = r.limits.theta_hi.as_double(), xe = r.limits.x_e_hi.as_double();
                 const bool ok = std::fabs(th - 0.375) < 1e-2 && std::fabs(xe - 0.375) < 1e-2 &&
                                 r.limits.x_n_lo.as_double() > 1e3;
                 return Outcome{ok, fmt("theta_bar %.6f x_e_bar %.6f", th, xe)};
               }});

  c.push_back({"noisy leader sufficiency", [] {
                 const SufficientSigmaL s = sufficient_sigma_l(1.0, 4);
                 ModelParams p = main_params(4, 2.0 * s.sigma_l_hat);
                 p.sigma_l = 2.0 * s.sigma_l_hat;
                 const SolveReport r = iterate_bounds_ext(p, 100000, 1e-9);
                 return Outcome{r.unique, fmt("sigma_l_hat %.6f", s.sigma_l_hat)};
               }});
  return c;
}

std::vector<Check> mc_checks(unsigned long long seed, int jobs) {
  std::vector<Check> c;
  struct Point {
    const char* label;
    ModelParams p;
    double x, z, x_h;
  };
  auto mk = [](int n, double sf, double sl, NoiseFamily f) {
    ModelParams p;
    p.n = n;
    p.sigma_f = sf;
    p.sigma_l = sl;
    p.noise = f;
    return p;
  };
  const std::vector<Point> grid = {
      {"main n=4 sf=0.5", mk(4, 0.5, 0.0, NoiseFamily::gaussian()), 0.3, 0.1, 0.4},
      {"main n=2 sf=1", mk(2, 1.0, 0.0, NoiseFamily::gaussian()), -0.8, 0.2, -0.5},
      {"laplace n=4 sf=0.3", mk(4, 0.3, 0.0, NoiseFamily::laplace()), 0.6, 0.4, 0.5},
      {"ext n=4 sf=1 sl=0.5", mk(4, 1.0, 0.5, NoiseFamily::gaussian()), 1.0, 0.0, 0.8},
      {"ext n=3 sf=0.4 sl=0.6", mk(3, 0.4, 0.6, NoiseFamily::gaussian()), 0.2, 0.3, 0.1},
  };
  for (const auto& pt : grid) {
    c.push_back({std::string("mc oracle ") + pt.label, [pt, seed, jobs] {
                   McConfig cfg;
                   cfg.n_samples = 1'000'000;
                   cfg.seed = seed;
                   cfg.antithetic = false;
                   cfg.threads = jobs;
                   const ModelParams& p = pt.p;
                   const bool ext = p.model() == Model::Extension;
                   double worst = 0.0;
                   auto score = [&](const McEstimate& e, double v) {
                     worst = std::max(worst, std::fabs(e.mean - v) / std::max(e.se, 1e-300));
                     return e.brackets(v);
                   };
                   bool ok = true;
                   for (History h : {History::Effort, History::NoEffort}) {
                     const double mean = ext ? posterior_mean_ext(pt.x, pt.z, h, p.sigma_f, p.sigma_l)
                                             : truncated_mean(pt.x, pt.z, h, p.sigma_f, p.noise);
                     const double rank = ext ? rank_belief_ext(pt.x, pt.z, h, p.sigma_f, p.sigma_l)
                                             : rank_belief_main(pt.x, pt.z, h, p.sigma_f, p.noise);
                     ok &= score(mc_posterior_mean(pt.x, pt.z, h, p, cfg), mean);
                     ok &= score(mc_rank_belief(pt.x, pt.z, h, p, cfg), rank);
                     ok &= score(mc_follower_payoff(pt.x, pt.z, pt.x_h, h, p, cfg),
                                 follower_payoff(pt.x, pt.z, ExtReal(pt.x_h), h, p));
                     ok &= score(mc_follower_payoff(pt.x, pt.z, pt.x, h, p, cfg),
                                 follower_fixed_point_residual(pt.x, pt.z, h, p));
                   }
                   ok &= score(mc_leader_payoff(pt.z, pt.x_h, p, cfg), leader_payoff(pt.z, ExtReal(pt.x_h), p));
                   return Outcome{ok, fmt("max |z| %.2f", worst)};
                 }});
  }
  c.push_back({"mc determinism", [seed, jobs] {
                 ModelParams p = main_params(4, 0.5);
                 p.sigma_l = 0.5;
                 McConfig one{200'000, seed, true, 1}, many{200'000, seed, true, std::max(jobs, 3)};
                 const McEstimate a = mc_rank_belief(0.3, 0.0, History::Effort, p, one);
                 const McEstimate b = mc_rank_belief(0.3, 0.0, History::Effort, p, many);
                 return Outcome{a.mean == b.mean && a.se == b.se, "thread count does not change the estimate"};
               }});
  c.push_back({"imitation profile outcome", [seed, jobs] {
                 const ModelParams p = main_params(2, 0.3);
                 const auto rows = mc_game_outcome(Profile{}, {0.5, -0.5}, p, McConfig{100'000, seed, false, jobs});
                 const bool ok = std::fabs(rows[0].leader_payoff.mean - 0.5) < 1e-12 && rows[0].follower_effort == 1.0 &&
                                 rows[1].leader_payoff.mean == 0.0 && rows[1].leader_effort == 0.0;
                 return Outcome{ok, fmt("leader payoff at 0.5: %.6f", rows[0].leader_payoff.mean)};
               }});
  return c;
}

}  // namespace

bool run_verify(const VerifyOptions& opt, std::ostream& out) {
  std::vector<Check> checks;
  if (opt.suite == "analytic" || opt.suite == "all") {
    auto a = analytic_checks(opt.seed);
    checks.insert(checks.end(), a.begin(), a.end());
  }
  if (opt.suite == "mc" || opt.suite == "all") {
    auto m = mc_checks(opt.seed, std::max(opt.jobs, 1));
    checks.insert(checks.end(), m.begin(), m.end());
  }
  int failed = 0;
  for (const auto& ch : checks) {
    Outcome o;
    try {
      o = ch.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    out << (o.pass ? "PASS  " : "FAIL  ") << ch.name << "  (" << o.detail << ")\n";
  }
  out << (failed == 0 ? "all " + std::to_string(checks.size()) + " checks passed"
                      : std::to_string(failed) + " of " + std::to_string(checks.size()) + " checks failed")
      << "\n";
  return failed == 0;
}

}  // namespace ratbounds::cli
