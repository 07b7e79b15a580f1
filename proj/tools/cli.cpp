#include "cli.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <json.hpp>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "ratbounds/beliefs.hpp"
#include "ratbounds/payoffs.hpp"
#include "ratbounds/rationalizability.hpp"

namespace ratbounds::cli {

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelFlags {
  int n = 2;
  double sigma_f = 1.0;
  double sigma_l = 0.0;
  std::string family = "gaussian";
  double scale = 1.0;
  double tol = 1e-9;
  // Rounds grow roughly like 4 / sigma_f as sigma_f -> 0, so the default is
  // far above the library's.
  int max_rounds = 200000;

  void add_to(CLI::App& app) {
    app.add_option("--n", n, "number of followers (>= 2)")->capture_default_str();
    app.add_option("--sigma-f", sigma_f, "follower signal noise")->capture_default_str();
    app.add_option("--sigma-l", sigma_l, "leader signal noise (0 = perfectly informed)")->capture_default_str();
    app.add_option("--family", family, "noise family")
        ->check(CLI::IsMember({"gaussian", "laplace", "logistic"}))
        ->capture_default_str();
    app.add_option("--scale", scale, "noise family scale")->capture_default_str();
    app.add_option("--tol", tol, "convergence tolerance")->capture_default_str();
    app.add_option("--max-rounds", max_rounds, "round cap for the iteration")->capture_default_str();
  }

  ModelParams params() const {
    ModelParams p;
    p.n = n;
    p.sigma_f = sigma_f;
    p.sigma_l = sigma_l;
    try {
      p.noise = NoiseFamily::parse(family, scale);
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    if (!(tol > 0.0)) throw UsageError("--tol must be positive");
    if (max_rounds < 2) throw UsageError("--max-rounds must be at least 2");
    return p;
  }
};

ordered_json ext_json(const ExtReal& v) {
  if (v.is_neg_inf()) return "-inf";
  if (v.is_pos_inf()) return "+inf";
  return v.value();
}

std::string ext_csv(const ExtReal& v) {
  if (!v.is_finite()) return v.is_neg_inf() ? "-inf" : "+inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v.value());
  return buf;
}

std::string num_csv(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "+inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

ordered_json report_json(const SolveReport& r, const ModelParams& p) {
  ordered_json j;
  j["model"] = model_name(r.model);
  j["n"] = p.n;
  j["sigma_f"] = p.sigma_f;
  j["sigma_l"] = p.sigma_l;
  j["family"] = p.noise.name();
  j["theta_bar"] = ext_json(r.limits.theta_hi);
  j["x_e_bar"] = ext_json(r.limits.x_e_hi);
  j["x_n_lo"] = ext_json(r.limits.x_n_lo);
  j["unique"] = r.unique;
  j["rounds"] = r.rounds_used;
  j["converged"] = r.converged;
  ordered_json b;
  for (int i = 0; i < BoundsState::kSize; ++i) b[BoundsState::field_name(i)] = ext_json(r.limits[i]);
  j["bounds"] = b;
  if (r.model == Model::LogConcave) j["iota_round"] = r.iota_round;
  return j;
}

int cmd_bounds(const ModelFlags& f, std::ostream& out, std::ostream& err) {
  const ModelParams p = f.params();
  SolveReport r;
  try {
    r = iterate_bounds(p, f.max_rounds, f.tol);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "solver failed: " << e.what() << "\n";
    return kSolverFailed;
  }
  out << report_json(r, p).dump(2) << "\n";
  if (!r.converged) {
    err << "solver did not converge within " << f.max_rounds << " rounds\n";
    return kSolverFailed;
  }
  return kOk;
}

int cmd_critical(const ModelFlags& f, double gamma, std::ostream& out, std::ostream& err) {
  if (f.n < 2) throw UsageError("--n must be at least 2");
  ordered_json j;
  j["n"] = f.n;
  try {
    if (gamma > 0.0) {
      const SufficientSigmaL s = sufficient_sigma_l(gamma, f.n);
      j["gamma"] = gamma;
      j["big_lambda"] = s.big_lambda;
      j["sigma_l_hat1"] = s.sigma_l_hat1;
      j["sigma_l_hat2"] = s.sigma_l_hat2;
      j["sigma_l_hat"] = s.sigma_l_hat;
    } else if (f.family != "gaussian") {
      const NoiseFamily noise = NoiseFamily::parse(f.family, f.scale);
      j["family"] = noise.name();
      j["scale"] = noise.scale();
      j["eta"] = noise.eta();
      j["sigma_f_sufficient"] = (f.n - 1.0) / (f.n * noise.eta());
    } else {
      const CriticalPoint c = critical_point(f.n);
      j["sigma_f_hat"] = c.sigma_f_hat;
      j["x_tangent"] = c.x_tangent;
      j["sigma_f_lower_bound"] = critical_sigma_f_lower_bound(f.n);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::exception& e) {
    err << "solver failed: " << e.what() << "\n";
    return kSolverFailed;
  }
  out << j.dump(2) << "\n";
  return kOk;
}

struct SweepFlags {
  std::string var = "sigma_f";
  double start = 0.01, stop = 1.0;
  int points = 50;
  std::string spacing = "linear";
  std::string curve;
  double z = 0.0;
  std::string history = "effort";
  std::string out_path;
  int jobs = 1;
};

std::vector<double> sweep_grid(const SweepFlags& s) {
  if (s.var == "n" && s.curve.empty()) {
    // Every integer in [start, stop]; --points and --spacing do not apply.
    const int lo = static_cast<int>(std::ceil(s.start)), hi = static_cast<int>(std::floor(s.stop));
    if (lo < 2 || hi <= lo) throw UsageError("--var n needs integers 2 <= start < stop");
    std::vector<double> g;
    for (int k = lo; k <= hi; ++k) g.push_back(k);
    return g;
  }
  if (s.points < 2) throw UsageError("--points must be at least 2");
  if (!(s.start < s.stop)) throw UsageError("--start must be below --stop");
  if (s.spacing == "log" && !(s.start > 0.0)) throw UsageError("log spacing needs --start > 0");
  std::vector<double> g(static_cast<std::size_t>(s.points));
  for (int i = 0; i < s.points; ++i) {
    const double t = static_cast<double>(i) / (s.points - 1);
    g[i] = s.spacing == "log" ? std::exp(std::log(s.start) + t * (std::log(s.stop) - std::log(s.start)))
                              : s.start + t * (s.stop - s.start);
  }
  g.front() = s.start;
  g.back() = s.stop;
  return g;
}

void write_metadata(std::ostream& os, const ModelFlags& f, const SweepFlags& s) {
  os << "# ratbounds sweep\n";
  if (s.curve.empty())
    os << "# var=" << s.var << " start=" << num_csv(s.start) << " stop=" << num_csv(s.stop)
       << " points=" << s.points << " spacing=" << s.spacing << "\n";
  else
    os << "# curve=" << s.curve << " history=" << s.history << " z=" << num_csv(s.z) << " start=" << num_csv(s.start)
       << " stop=" << num_csv(s.stop) << " points=" << s.points << " spacing=" << s.spacing << "\n";
  os << "# n=" << f.n << " sigma_f=" << num_csv(f.sigma_f) << " sigma_l=" << num_csv(f.sigma_l)
     << " family=" << f.family << " scale=" << num_csv(f.scale) << " tol=" << num_csv(f.tol)
     << " max_rounds=" << f.max_rounds << "\n";
}

// Fixed-point curve: lhs is the posterior mean net of the NoEffort penalty,
// rhs the coordination term (n-1)/n times the rank belief.
void write_curve(std::ostream& os, const ModelParams& p, const SweepFlags& s) {
  const History h = s.history == "effort" ? History::Effort : History::NoEffort;
  const double c = p.coord();
  const double penalty = chi_n(h) / p.n;
  os << "x,lhs,rhs,residual\n";
  for (double x : sweep_grid(s)) {
    double mean, rank;
    if (p.model() == Model::Extension) {
      mean = posterior_mean_ext(x, s.z, h, p.sigma_f, p.sigma_l);
      rank = rank_belief_ext(x, s.z, h, p.sigma_f, p.sigma_l);
    } else {
      mean = truncated_mean(x, s.z, h, p.sigma_f, p.noise);
      rank = rank_belief_main(x, s.z, h, p.sigma_f, p.noise);
    }
    const double lhs = mean - penalty, rhs = c * rank;
    os << num_csv(x) << ',' << num_csv(lhs) << ',' << num_csv(rhs) << ',' << num_csv(lhs - rhs) << "\n";
  }
}

struct SweepRow {
  std::string text;
  std::string error;
};

int write_bounds_sweep(std::ostream& os, const ModelFlags& f, const SweepFlags& s, std::ostream& err) {
  const std::vector<double> grid = sweep_grid(s);
  const bool by_gamma = s.var == "gamma";
  if (by_gamma && !(f.sigma_l > 0.0)) throw UsageError("--var gamma needs --sigma-l > 0 (sigma_f = gamma * sigma_l)");
  if (s.var == "sigma_l" && !f.params().noise.is_gaussian()) throw UsageError("the extension supports Gaussian noise only");
  const bool want_hat = !by_gamma && f.family == "gaussian";

  std::vector<ModelParams> points;
  for (double v : grid) {
    ModelFlags g = f;
    if (s.var == "sigma_f") g.sigma_f = v;
    else if (s.var == "sigma_l") g.sigma_l = v;
    else if (s.var == "n") g.n = static_cast<int>(v);
    else g.sigma_f = v * f.sigma_l;
    points.push_back(g.params());
  }

  // Critical values depend on n (and gamma) only; computed once each.
  std::map<int, double> hat_by_n;
  std::mutex hat_mu;
  auto hat_for = [&](int n) {
    {
      std::lock_guard lock(hat_mu);
      if (auto it = hat_by_n.find(n); it != hat_by_n.end()) return it->second;
    }
    const double v = critical_point(n).sigma_f_hat;
    std::lock_guard lock(hat_mu);
    hat_by_n[n] = v;
    return v;
  };

  auto solve = [&](std::size_t i) {
    SweepRow row;
    try {
      const ModelParams& p = points[i];
      const SolveReport r = iterate_bounds(p, f.max_rounds, f.tol);
      std::ostringstream line;
      line << num_csv(grid[i]) << ',' << model_name(r.model) << ',' << p.n << ',' << num_csv(p.sigma_f) << ','
           << num_csv(p.sigma_l) << ',' << p.noise.name();
      for (int k = 0; k < BoundsState::kSize; ++k) line << ',' << ext_csv(r.limits[k]);
      line << ',' << (r.unique ? 1 : 0) << ',' << (r.converged ? 1 : 0) << ',' << r.rounds_used;
      if (want_hat) line << ',' << num_csv(p.sigma_l == 0.0 ? hat_for(p.n) : NAN);
      if (by_gamma) {
        const SufficientSigmaL suf = sufficient_sigma_l(grid[i], p.n);
        line << ',' << num_csv(suf.sigma_l_hat1) << ',' << num_csv(suf.sigma_l_hat);
      }
      row.text = line.str();
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    return row;
  };

  std::vector<SweepRow> rows(points.size());
  const int jobs = std::clamp(s.jobs, 1, static_cast<int>(points.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) rows[i] = solve(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < points.size();) rows[i] = solve(i);
      });
    for (auto& th : pool) th.join();
  }

  // The swept variable is named in the metadata; "value" keeps column names unique.
  os << "value,model,n,sigma_f,sigma_l,family";
  for (int k = 0; k < BoundsState::kSize; ++k) os << ',' << BoundsState::field_name(k);
  os << ",unique,converged,rounds";
  if (want_hat) os << ",sigma_f_hat";
  if (by_gamma) os << ",sigma_l_hat1,sigma_l_hat";
  os << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].error.empty()) {
      err << "solver failed at " << s.var << " = " << num_csv(grid[i]) << ": " << rows[i].error << "\n";
      return kSolverFailed;
    }
    os << rows[i].text << "\n";
  }
  return kOk;
}

int cmd_sweep(const ModelFlags& f, const SweepFlags& s, std::ostream& out, std::ostream& err) {
  if (!s.curve.empty() && s.curve != "residual") throw UsageError("--curve accepts only 'residual'");
  const ModelParams base = f.params();
  sweep_grid(s);
  std::ofstream file;
  std::ostringstream buffer;
  if (!s.out_path.empty()) {
    file.open(s.out_path, std::ios::out | std::ios::trunc);
    if (!file) {
      err << "cannot write " << s.out_path << "\n";
      return kUnwritable;
    }
  }
  int code = kOk;
  write_metadata(buffer, f, s);
  try {
    if (!s.curve.empty()) write_curve(buffer, base, s);
    else code = write_bounds_sweep(buffer, f, s, err);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    err << "solver failed: " << e.what() << "\n";
    return kSolverFailed;
  }
  if (code != kOk) return code;
  if (file.is_open()) {
    file << buffer.str();
    file.flush();
    if (!file) {
      err << "cannot write " << s.out_path << "\n";
      return kUnwritable;
    }
  } else {
    out << buffer.str();
  }
  return kOk;
}

}  // namespace

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("ratbounds");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RATBOUNDS_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only "off" itself should do that.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dominance bounds for a leader-follower global game"};
  app.require_subcommand(1);

  ModelFlags model;
  double gamma = 0.0;
  SweepFlags sweep;
  VerifyOptions verify;

  CLI::App* bounds = app.add_subcommand("bounds", "limits of the six dominance-bound sequences (JSON)");
  model.add_to(*bounds);

  CLI::App* critical = app.add_subcommand("critical", "critical or sufficient noise level (JSON)");
  critical->add_option("--n", model.n, "number of followers")->capture_default_str();
  critical->add_option("--gamma", gamma, "ray sigma_f = gamma * sigma_l for the noisy-leader model");
  critical->add_option("--family", model.family)->check(CLI::IsMember({"gaussian", "laplace", "logistic"}));
  critical->add_option("--scale", model.scale);

  CLI::App* sw = app.add_subcommand("sweep", "bounds or fixed-point curve over a grid (CSV)");
  model.add_to(*sw);
  sw->add_option("--var", sweep.var, "swept parameter")
      ->check(CLI::IsMember({"sigma_f", "sigma_l", "n", "gamma"}))
      ->capture_default_str();
  sw->add_option("--start", sweep.start)->capture_default_str();
  sw->add_option("--stop", sweep.stop)->capture_default_str();
  sw->add_option("--points", sweep.points)->capture_default_str();
  sw->add_option("--spacing", sweep.spacing)->check(CLI::IsMember({"linear", "log"}))->capture_default_str();
  sw->add_option("--curve", sweep.curve, "'residual': fixed-point curve over x in [start, stop]");
  sw->add_option("--z", sweep.z, "leader cutoff for --curve")->capture_default_str();
  sw->add_option("--history", sweep.history)->check(CLI::IsMember({"effort", "no-effort"}))->capture_default_str();
  sw->add_option("--out", sweep.out_path, "output file (stdout if absent)");
  sw->add_option("--jobs", sweep.jobs, "worker threads")->capture_default_str();
  sw->add_option("--seed", verify.seed, "unused; accepted for uniform scripting");

  CLI::App* ver = app.add_subcommand("verify", "run the invariant suites");
  ver->add_option("--suite", verify.suite)->check(CLI::IsMember({"analytic", "mc", "all"}))->capture_default_str();
  ver->add_option("--seed", verify.seed)->capture_default_str();
  ver->add_option("--jobs", verify.jobs)->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*bounds) return cmd_bounds(model, out, err);
    if (*critical) return cmd_critical(model, gamma, out, err);
    if (*sw) return cmd_sweep(model, sweep, out, err);
    if (*ver) return run_verify(verify, out) ? kOk : kVerifyFailed;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace ratbounds::cli
