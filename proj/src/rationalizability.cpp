#include "ratbounds/rationalizability.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <cstdint>
#include <limits>

#include "ratbounds/kernels.hpp"
#include "ratbounds/roots.hpp"
#include "ratbounds/special_functions.hpp"

namespace ratbounds {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kAuditSlack = 1e-10;

// Relative beyond unit magnitude: far-tail roots carry a few ulps of noise.
double slack(const ExtReal& v) { return kAuditSlack * std::max(1.0, v.is_finite() ? std::fabs(v.value()) : 0.0); }
constexpr std::size_t kChunk = 1 << 15;

// Tracks linear convergence of one component; the error estimate is the
// geometric tail move * r / (1 - r) with r the ratio of successive moves.
struct ComponentTracker {
  double last_move = kNaN;
  double error = std::numeric_limits<double>::infinity();

  void update(const ExtReal& prev, const ExtReal& cur) {
    if (prev.kind() != cur.kind()) {
      error = std::numeric_limits<double>::infinity();
      last_move = kNaN;
      return;
    }
    if (!cur.is_finite()) {
      error = 0.0;
      return;
    }
    const double move = std::fabs(cur.value() - prev.value());
    if (move == 0.0) {
      error = 0.0;
    } else if (std::isnan(last_move) || last_move == 0.0) {
      error = std::numeric_limits<double>::infinity();
    } else {
      const double r = move / last_move;
      error = r < 1.0 ? move * r / (1.0 - r) : std::numeric_limits<double>::infinity();
    }
    last_move = move;
  }
};

BoundsState next_round(const BoundsState& s, const ModelParams& p) {
  BoundsState t;
  t.round = s.round + 1;
  const double lo_l = br_leader(s.x_e_lo, p);
  const double hi_l = br_leader(s.x_e_hi, p);
  t.theta_lo = ExtReal(lo_l);
  t.theta_hi = ExtReal(hi_l);
  t.x_e_lo = br_follower(hi_l, s.x_e_lo, History::Effort, p);
  t.x_e_hi = br_follower(lo_l, s.x_e_hi, History::Effort, p);
  t.x_n_lo = br_follower(hi_l, s.x_n_lo, History::NoEffort, p);
  t.x_n_hi = br_follower(lo_l, s.x_n_hi, History::NoEffort, p);
  return t;
}

std::vector<double> limit_residuals(const BoundsState& b, const ModelParams& p) {
  auto fp = [&](const ExtReal& x, const ExtReal& z, History h) {
    return x.is_finite() ? follower_fixed_point_residual(x.value(), z.value(), h, p) : kNaN;
  };
  return {leader_payoff(b.theta_lo.value(), b.x_e_lo, p), leader_payoff(b.theta_hi.value(), b.x_e_hi, p),
          fp(b.x_e_lo, b.theta_hi, History::Effort),     fp(b.x_e_hi, b.theta_lo, History::Effort),
          fp(b.x_n_lo, b.theta_hi, History::NoEffort),   fp(b.x_n_hi, b.theta_lo, History::NoEffort)};
}

bool bounds_unique(const BoundsState& b, double tol) {
  const double u = uniqueness_tolerance(tol);
  return same_within(b.theta_lo, b.theta_hi, u) && same_within(b.x_e_lo, b.x_e_hi, u) &&
         same_within(b.x_n_lo, b.x_n_hi, u);
}

std::string describe(const BoundsState& s) {
  std::string out;
  for (int i = 0; i < BoundsState::kSize; ++i) {
    if (i) out += ' ';
    out += BoundsState::field_name(i);
    out += '=';
    out += s[i].to_string();
  }
  return out;
}

SolveReport run_iteration(const ModelParams& p, int max_rounds, double tol) {
  if (max_rounds < 2) throw std::invalid_argument("max_rounds must be at least 2");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  SolveReport r;
  r.model = p.model();
  BoundsState cur;
  r.trace.push_back(cur);
  std::array<ComponentTracker, BoundsState::kSize> trackers;
  for (int k = 1; k <= max_rounds; ++k) {
    BoundsState nxt = next_round(cur, p);
    double worst = 0.0;
    for (int i = 0; i < BoundsState::kSize; ++i) {
      trackers[i].update(cur[i], nxt[i]);
      worst = std::max(worst, trackers[i].error);
    }
    r.trace.push_back(nxt);
    cur = nxt;
    spdlog::debug("round {}: {}", k, describe(cur));
    if (k >= 2 && worst < tol) {
      r.converged = true;
      break;
    }
  }
  r.limits = cur;
  r.rounds_used = cur.round;
  r.unique = bounds_unique(cur, tol);
  r.residuals = limit_residuals(cur, p);
  if (!r.converged) spdlog::warn("no convergence after {} rounds: {}", max_rounds, describe(cur));
  audit_trace(r);
  return r;
}

// Residual of the perfectly-informed-leader fixed-point equation on a grid,
// evaluated chunk by chunk with the batched kernel.
class ResidualScan {
 public:
  ResidualScan(const ModelParams& p, double z, History h) : p_(p), z_(z), h_(h) {}
  void eval(double start, double step, std::size_t count, std::vector<double>& xs, std::vector<double>& out) const {
    xs.resize(count);
    out.resize(count);
    for (std::size_t i = 0; i < count; ++i) xs[i] = start + step * static_cast<double>(i);
    kernels::residual_main(xs, out, z_, p_.sigma_f, p_.coord(), 1.0 / p_.n, h_ == History::Effort);
  }
  double exact(double x) const { return follower_fixed_point_residual(x, z_, h_, p_); }
  double refine(double a, double b) const {
    auto f = [this](double x) { return exact(x); };
    return bracketed_root(f, a, b, f(a), f(b));
  }

 private:
  const ModelParams& p_;
  double z_;
  History h_;
};

// Largest x in [lo, hi] where the residual crosses zero upward, scanning
// from the right.
ExtReal largest_root(const ResidualScan& scan, double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  std::vector<double> xs, r;
  double right_x = lo + step * static_cast<double>(n);
  double right_r = scan.exact(right_x);
  if (right_r <= 0.0) throw std::runtime_error("largest_root: residual not positive at the scan's right end");
  std::size_t end = n;  // grid index of right_x
  while (end > 0) {
    const std::size_t count = std::min(kChunk, end);
    const std::size_t begin = end - count;
    scan.eval(lo + step * static_cast<double>(begin), step, count, xs, r);
    for (std::size_t j = count; j-- > 0;) {
      const double a = lo + step * static_cast<double>(begin + j);
      if (r[j] <= 0.0) {
        // The kernel and the exact residual can differ in sign by a few ulps
        // next to a root; the exact values decide.
        const double fb = scan.exact(right_x);
        if (fb <= 0.0) return ExtReal(right_x);
        if (scan.exact(a) <= 0.0) return ExtReal(scan.refine(a, right_x));
      }
      right_x = a;
    }
    end = begin;
  }
  return ExtReal::neg_inf();
}

// Smallest x in [lo, hi] where the residual reaches zero from below.
ExtReal smallest_root(const ResidualScan& scan, double lo, double hi, double step) {
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  std::vector<double> xs, r;
  if (scan.exact(lo) >= 0.0) throw std::runtime_error("smallest_root: residual not negative at the scan's left end");
  double left_x = lo;
  std::size_t begin = 1;
  while (begin <= n) {
    const std::size_t count = std::min(kChunk, n + 1 - begin);
    scan.eval(lo + step * static_cast<double>(begin), step, count, xs, r);
    for (std::size_t j = 0; j < count; ++j) {
      const double x = lo + step * static_cast<double>(begin + j);
      if (r[j] >= 0.0) {
        if (scan.exact(left_x) >= 0.0) return ExtReal(left_x);
        if (scan.exact(x) >= 0.0) return ExtReal(scan.refine(left_x, x));
      }
      left_x = x;
    }
    begin += count;
  }
  return ExtReal::pos_inf();
}

// min over x in [0, 2] of x - rho(x, sigma); rho is concave for x > 0.
std::pair<double, double> min_gap(int n, double sigma) {
  ModelParams p;
  p.n = n;
  p.sigma_f = sigma;
  auto gap = [&](double x) { return follower_fixed_point_residual(x, 0.0, History::Effort, p); };
  constexpr int kGrid = 400;
  int best = 0;
  double best_v = gap(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = gap(2.0 * i / kGrid);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double a = 2.0 * std::max(best - 1, 0) / kGrid;
  const double b = 2.0 * std::min(best + 1, kGrid) / kGrid;
  std::uintmax_t iters = 200;
  auto [x, v] = boost::math::tools::brent_find_minima(gap, a, b, 26, iters);
  return v < best_v ? std::pair{v, x} : std::pair{best_v, 2.0 * best / kGrid};
}

// Grid max followed by a Brent polish around the best grid point.
template <class F>
std::pair<double, double> maximize_on(F&& f, double lo, double hi, int points) {
  const double h = (hi - lo) / (points - 1);
  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double v = f(lo + h * i);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  const double a = lo + h * std::max(best - 1, 0);
  const double b = lo + h * std::min(best + 1, points - 1);
  std::uintmax_t iters = 200;
  auto [y, v] = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, a, b, 26, iters);
  if (-v > best_v) return {-v, y};
  return {best_v, lo + h * best};
}

}  // namespace

ExtReal& BoundsState::operator[](int i) {
  switch (i) {
    case 0: return theta_lo;
    case 1: return theta_hi;
    case 2: return x_e_lo;
    case 3: return x_e_hi;
    case 4: return x_n_lo;
    default: return x_n_hi;
  }
}

const ExtReal& BoundsState::operator[](int i) const { return const_cast<BoundsState&>(*this)[i]; }

const char* BoundsState::field_name(int i) {
  static const char* names[] = {"theta_lo", "theta_hi", "x_e_lo", "x_e_hi", "x_n_lo", "x_n_hi"};
  return names[std::clamp(i, 0, kSize - 1)];
}

double uniqueness_tolerance(double tol) { return std::max(1e-7, 1e3 * tol); }

AuditError::AuditError(int round, const std::string& what)
    : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}

SolveReport iterate_bounds_main(const ModelParams& p, int max_rounds, double tol) {
  p.validate();
  if (p.model() != Model::Main) throw std::invalid_argument("iterate_bounds_main needs sigma_l = 0 and Gaussian noise");
  return run_iteration(p, max_rounds, tol);
}

SolveReport iterate_bounds_ext(const ModelParams& p, int max_rounds, double tol) {
  p.validate();
  if (p.model() != Model::Extension) throw std::invalid_argument("iterate_bounds_ext needs sigma_l > 0");
  return run_iteration(p, max_rounds, tol);
}

SolveReport iterate_bounds_logconcave(const ModelParams& p, int max_rounds, double tol) {
  p.validate();
  if (p.sigma_l != 0.0) throw std::invalid_argument("iterate_bounds_logconcave needs sigma_l = 0");
  const double eta = p.noise.eta();
  if (!(eta > 0.0))
    throw std::invalid_argument("noise family has eta = 0; use iterate_bounds_main for Gaussian noise");
  SolveReport r = run_iteration(p, max_rounds, tol);
  const double c = p.coord();
  double prev_e = std::numeric_limits<double>::infinity(), prev_n = prev_e;
  auto cdf = [&](const ExtReal& t, double a) {
    if (t.is_neg_inf()) return 0.0;
    if (t.is_pos_inf()) return 1.0;
    return p.noise.cdf((t.value() - a) / p.sigma_f);
  };
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    const BoundsState& before = r.trace[k - 1];
    const double theta_hi = r.trace[k].theta_hi.value();
    const double iota_e = c / eta * cdf(before.x_e_hi, 0.0);
    const double iota_n = (theta_hi - 1.0 / p.n - c * cdf(before.x_n_lo, theta_hi)) / eta;
    r.iota.emplace_back(iota_e, iota_n);
    if (r.iota_round == 0 && std::max(iota_e, iota_n) <= p.sigma_f && p.sigma_f < std::min(prev_e, prev_n))
      r.iota_round = static_cast<int>(k);
    prev_e = iota_e;
    prev_n = iota_n;
  }
  return r;
}

SolveReport iterate_bounds(const ModelParams& p, int max_rounds, double tol) {
  switch (p.model()) {
    case Model::Extension: return iterate_bounds_ext(p, max_rounds, tol);
    case Model::LogConcave: return iterate_bounds_logconcave(p, max_rounds, tol);
    default: return iterate_bounds_main(p, max_rounds, tol);
  }
}

SolveReport solve_limits_main(const ModelParams& p, double tol, bool cross_check) {
  p.validate();
  if (p.model() != Model::Main) throw std::invalid_argument("solve_limits_main needs sigma_l = 0 and Gaussian noise");
  const double step = std::min(p.sigma_f, 1.0) * 1e-3;
  SolveReport r;
  r.model = Model::Main;
  BoundsState& b = r.limits;
  b.theta_lo = ExtReal(0.0);
  b.x_e_lo = ExtReal::neg_inf();
  b.x_n_hi = ExtReal::pos_inf();
  b.x_e_hi = largest_root(ResidualScan(p, 0.0, History::Effort), -2.0, 2.0, step);
  const double theta_hi = br_leader(b.x_e_hi, p);
  b.theta_hi = ExtReal(theta_hi);
  const double n_lo = (p.n + 1.0) / (2.0 * p.n) - 0.01;
  const double n_hi = std::max(theta_hi, n_lo) + 40.0 * p.sigma_f + 0.01;
  b.x_n_lo = smallest_root(ResidualScan(p, theta_hi, History::NoEffort), n_lo, n_hi, step);
  r.unique = bounds_unique(b, tol);
  r.converged = true;
  r.residuals = limit_residuals(b, p);
  if (cross_check) {
    const SolveReport it = iterate_bounds_main(p, 100000, tol);
    for (int i = 0; i < BoundsState::kSize; ++i)
      if (!same_within(b[i], it.limits[i], 10.0 * tol))
        throw ConsistencyError(std::string("limit solver and iteration disagree on ") + BoundsState::field_name(i) +
                               ": " + b[i].to_string() + " vs " + it.limits[i].to_string());
  }
  return r;
}

void audit_trace(const SolveReport& r) {
  const bool ext = r.model == Model::Extension;
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    const BoundsState& a = r.trace[k - 1];
    const BoundsState& s = r.trace[k];
    const int round = s.round;
    for (int i = 0; i < BoundsState::kSize; i += 2)
      if (s[i].as_double() > s[i + 1].as_double() + slack(s[i + 1]))
        throw AuditError(round, std::string(BoundsState::field_name(i)) + " exceeds its upper bound");
    for (int i = 0; i < BoundsState::kSize; ++i) {
      const bool lower = i % 2 == 0;
      const double prev = a[i].as_double(), cur = s[i].as_double();
      if (lower ? cur < prev - slack(a[i]) : cur > prev + slack(a[i]))
        throw AuditError(round, std::string(BoundsState::field_name(i)) + " moved against its direction");
    }
    if (!ext) {
      if (s.theta_lo.as_double() != 0.0) throw AuditError(round, "theta_lo is not 0");
      if (!s.x_e_lo.is_neg_inf()) throw AuditError(round, "x_e_lo is not -inf");
      if (!s.x_n_hi.is_pos_inf()) throw AuditError(round, "x_n_hi is not +inf");
      if (!(s.theta_hi.as_double() <= 1.0)) throw AuditError(round, "theta_hi above 1");
    }
  }
}

double critical_sigma_f_lower_bound(int n) { return (n - 1.0) / (8.0 * n * kInvSqrt2Pi); }

CriticalPoint critical_point(int n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  double lo = critical_sigma_f_lower_bound(n);
  if (min_gap(n, lo).first > 0.0) throw std::runtime_error("critical_point: no fixed point at the lower bound");
  double hi = 2.0 * lo;
  for (int i = 0; min_gap(n, hi).first <= 0.0; ++i) {
    if (i > 60) throw std::runtime_error("critical_point: could not bracket the tangency");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (min_gap(n, mid).first <= 0.0 ? lo : hi) = mid;
  }
  return {hi, min_gap(n, hi).second};
}

int count_fixed_points_main(int n, double sigma_f, double step, double lo, double hi) {
  ModelParams p;
  p.n = n;
  p.sigma_f = sigma_f;
  p.validate();
  ResidualScan scan(p, 0.0, History::Effort);
  const auto total = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 1;
  std::vector<double> xs, r;
  int changes = 0;
  int prev_sign = 0;
  for (std::size_t begin = 0; begin < total; begin += kChunk) {
    const std::size_t count = std::min(kChunk, total - begin);
    scan.eval(lo + step * static_cast<double>(begin), step, count, xs, r);
    for (double v : r) {
      const int sign = v > 0.0 ? 1 : -1;
      if (prev_sign != 0 && sign != prev_sign) ++changes;
      prev_sign = sign;
    }
  }
  return changes;
}

namespace {

// M as a function of sigma_l for fixed (gamma, n). Only the weight on the
// S-tilde term depends on sigma_l, so both terms are tabulated once.
class ContractionM {
 public:
  ContractionM(double gamma, int n)
      : alpha_(gamma / std::sqrt(2.0 + gamma * gamma)),
        share_(gamma * gamma / (1.0 + gamma * gamma)),
        k1_((n - 1.0) / (n * std::sqrt(1.0 + gamma * gamma))) {
    for (int i = 0; i < kPoints; ++i) {
      const double y = y_at(i);
      hazard_[i] = -share_ * reversed_hazard_deriv(y);
      slope_[i] = s_tilde_dy(y, alpha_);
    }
  }

  // Same result as maximize_on over the same grid, without re-evaluating it.
  double operator()(double sigma_l) const {
    const double k = k1_ / sigma_l;
    int best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kPoints; ++i) {
      const double v = hazard_[i] + k * slope_[i];
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    auto f = [&](double y) { return -share_ * reversed_hazard_deriv(y) + k * s_tilde_dy(y, alpha_); };
    std::uintmax_t iters = 200;
    auto [y, v] = boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, y_at(std::max(best - 1, 0)),
                                                        y_at(std::min(best + 1, kPoints - 1)), 26, iters);
    return std::max(-v, best_v);
  }

 private:
  static constexpr int kPoints = 1001;
  static double y_at(int i) { return -50.0 + 0.1 * i; }

  double alpha_, share_, k1_;
  std::array<double, kPoints> hazard_{}, slope_{};
};

}  // namespace

double contraction_m(double sigma_l, double gamma, int n) { return ContractionM(gamma, n)(sigma_l); }

double contraction_m_g(double sigma_l, double gamma) {
  return kInvSqrt2Pi / (sigma_l * std::sqrt(1.0 + gamma * gamma) + kInvSqrt2Pi);
}

double contraction_m_f(double sigma_l, double gamma, int n) {
  const double m = contraction_m(sigma_l, gamma, n);
  return m / (m - 1.0);
}

SufficientSigmaL sufficient_sigma_l(double gamma, int n) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma must be positive");
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  const double alpha = gamma / std::sqrt(2.0 + gamma * gamma);
  const double g2 = gamma * gamma;
  auto ratio = [&](double y) { return s_tilde_dy(y, alpha) / (1.0 + g2 * (1.0 + reversed_hazard_deriv(y))); };
  SufficientSigmaL out;
  std::tie(out.big_lambda, out.argmax_y) = maximize_on(ratio, -50.0, 50.0, 1001);
  if (!(out.big_lambda > 0.0) || !std::isfinite(out.big_lambda))
    throw std::runtime_error("sufficient_sigma_l: maximisation for Lambda failed");
  const double c = (n - 1.0) / n;
  out.sigma_l_hat1 = c * std::sqrt(1.0 + g2) * out.big_lambda;

  const ContractionM m_of(gamma, n);
  auto bound = [&](double s) {
    const double m = m_of(s);
    if (m >= 1.0) return std::numeric_limits<double>::infinity();
    const double v = contraction_m_g(s, gamma) * m / (m - 1.0);
    return v * v;
  };
  double lo = out.sigma_l_hat1, hi = 2.0 * out.sigma_l_hat1;
  for (int i = 0; bound(hi) >= 1.0; ++i) {
    if (i > 60) throw std::runtime_error("sufficient_sigma_l: contraction bound never drops below 1");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) < 1.0 ? hi : lo) = mid;
  }
  out.sigma_l_hat2 = hi;
  out.sigma_l_hat = std::max(out.sigma_l_hat1, out.sigma_l_hat2);
  return out;
}

MonotoneEquilibriumReport verify_monotone_equilibrium(const ModelParams& p) {
  p.validate();
  if (p.sigma_l != 0.0) throw std::invalid_argument("verify_monotone_equilibrium needs sigma_l = 0");
  MonotoneEquilibriumReport out;
  const ExtReal e = br_follower(0.0, ExtReal::neg_inf(), History::Effort, p);
  const ExtReal ne = br_follower(0.0, ExtReal::pos_inf(), History::NoEffort, p);
  const double l = br_leader(ExtReal::neg_inf(), p);
  out.follower_effort_ok = e.is_neg_inf();
  out.follower_no_effort_ok = ne.is_pos_inf();
  out.leader_ok = l == 0.0;
  if (!out.follower_effort_ok) out.counterexample = "best response after Effort is " + e.to_string();
  if (!out.follower_no_effort_ok) out.counterexample = "best response after NoEffort is " + ne.to_string();
  if (!out.leader_ok) out.counterexample = "leader best response is " + std::to_string(l);

  constexpr std::size_t kPoints = 600001;
  std::vector<double> y(kPoints), lam(kPoints), cdf(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) y[i] = -30.0 + 60.0 * static_cast<double>(i) / (kPoints - 1);
  kernels::reversed_hazard(y, lam);
  kernels::normal_cdf_affine(y, cdf);
  const double w = (p.n + 1.0) / (2.0 * p.n);
  out.b4_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kPoints; ++i) {
    const double v = y[i] + lam[i] + w * cdf[i];
    if (v < out.b4_min) {
      out.b4_min = v;
      out.b4_argmin = y[i];
    }
  }
  if (!(out.b4_min > 0.0) && out.counterexample.empty())
    out.counterexample = "interior residual " + std::to_string(out.b4_min) + " at y = " + std::to_string(out.b4_argmin);
  return out;
}

}  // namespace ratbounds
