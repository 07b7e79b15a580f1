#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ratbounds/ext_real.hpp"
#include "ratbounds/payoffs.hpp"

namespace ratbounds {

// One round of dominance bounds. For the extension the leader bounds are
// cutoffs on the leader's signal rather than on theta.
struct BoundsState {
  ExtReal theta_lo = ExtReal::neg_inf();
  ExtReal theta_hi = ExtReal::pos_inf();
  ExtReal x_e_lo = ExtReal::neg_inf();
  ExtReal x_e_hi = ExtReal::pos_inf();
  ExtReal x_n_lo = ExtReal::neg_inf();
  ExtReal x_n_hi = ExtReal::pos_inf();
  int round = 0;

  static constexpr int kSize = 6;
  ExtReal& operator[](int i);
  const ExtReal& operator[](int i) const;
  static const char* field_name(int i);
};

struct SolveReport {
  Model model = Model::Main;
  BoundsState limits;
  bool unique = false;
  bool converged = false;
  int rounds_used = 0;
  std::vector<BoundsState> trace;
  // Residuals of the limit equations at the reported limits; NaN where a
  // bound is infinite and the equation does not apply.
  std::vector<double> residuals;
  // Log-concave runs: iota_E^k, iota_N^k per round (index k-1) and the first
  // round k with max(iota^k) <= sigma_f < min(iota^{k-1}), or 0 if none.
  std::vector<std::pair<double, double>> iota;
  int iota_round = 0;
};

struct IterationOptions {
  int max_rounds = 500;
  double tol = 1e-9;
};

// Lo and hi within this distance count as one point for `unique`.
double uniqueness_tolerance(double tol);

class ConsistencyError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class AuditError : public std::runtime_error {
 public:
  AuditError(int round, const std::string& what);
  int round() const { return round_; }

 private:
  int round_;
};

SolveReport iterate_bounds_main(const ModelParams& p, int max_rounds = 500, double tol = 1e-9);
SolveReport iterate_bounds_ext(const ModelParams& p, int max_rounds = 500, double tol = 1e-9);
SolveReport iterate_bounds_logconcave(const ModelParams& p, int max_rounds = 500, double tol = 1e-9);
// Dispatches on p.model().
SolveReport iterate_bounds(const ModelParams& p, int max_rounds = 500, double tol = 1e-9);

// Limits from the fixed-point equations directly: x_e_hi is the largest root
// of the Effort residual at z = 0, theta_hi its leader best response, x_n_lo
// the smallest root of the NoEffort residual at z = theta_hi. With
// cross_check the iterative engine is run too and must agree within 10 tol.
SolveReport solve_limits_main(const ModelParams& p, double tol = 1e-9, bool cross_check = true);

// Throws AuditError naming the first round that breaks the monotonicity and
// ordering pattern of the model's six sequences.
void audit_trace(const SolveReport& r);

struct CriticalPoint {
  double sigma_f_hat = 0.0;
  double x_tangent = 0.0;
};
// The sigma_f at which x = rho(x, sigma_f) turns from two solutions to none.
CriticalPoint critical_point(int n);
inline double critical_sigma_f(int n) { return critical_point(n).sigma_f_hat; }
// (n-1)/(8 n phi(0)), below which the fixed-point equation always has roots.
double critical_sigma_f_lower_bound(int n);
// Solution count of x = rho(x, sigma) from sign changes on a uniform grid.
int count_fixed_points_main(int n, double sigma_f, double step = 1e-5, double lo = -2.0, double hi = 2.0);

struct SufficientSigmaL {
  double big_lambda = 0.0;
  double argmax_y = 0.0;
  double sigma_l_hat1 = 0.0;
  double sigma_l_hat2 = 0.0;
  double sigma_l_hat = 0.0;
};
SufficientSigmaL sufficient_sigma_l(double gamma, int n);
double contraction_m(double sigma_l, double gamma, int n);
double contraction_m_g(double sigma_l, double gamma);
double contraction_m_f(double sigma_l, double gamma, int n);

struct MonotoneEquilibriumReport {
  bool follower_effort_ok = false;
  bool follower_no_effort_ok = false;
  bool leader_ok = false;
  double b4_min = 0.0;
  double b4_argmin = 0.0;
  std::string counterexample;
  bool passed() const { return follower_effort_ok && follower_no_effort_ok && leader_ok && b4_min > 0.0; }
};
MonotoneEquilibriumReport verify_monotone_equilibrium(const ModelParams& p);

}  // namespace ratbounds
