#pragma once

#include <functional>
#include <string>

namespace ratbounds {

enum class Family { Gaussian, Laplace, Logistic };

// Symmetric log-concave signal noise with a scale parameter. Signals are
// x = theta + sigma_f * eps with eps drawn from the family.
class NoiseFamily {
 public:
  NoiseFamily() = default;
  NoiseFamily(Family kind, double scale);

  static NoiseFamily gaussian(double scale = 1.0) { return {Family::Gaussian, scale}; }
  static NoiseFamily laplace(double scale = 1.0) { return {Family::Laplace, scale}; }
  static NoiseFamily logistic(double scale = 1.0) { return {Family::Logistic, scale}; }
  static NoiseFamily parse(const std::string& name, double scale = 1.0);

  Family kind() const { return kind_; }
  double scale() const { return scale_; }
  std::string name() const;
  bool is_gaussian() const { return kind_ == Family::Gaussian; }

  double pdf(double x) const;
  double log_pdf(double x) const;
  double cdf(double x) const;
  double log_cdf(double x) const;
  double quantile(double p) const;
  double quantile_from_log(double log_p) const;

  // F(x)/f(x), evaluated without forming tiny quotients.
  double tail_ratio(double x) const;
  // lim_{x -> -inf} F(x)/f(x).
  double eta() const;
  // delta(u) = int_{-inf}^u F / F(u); varsigma(u) = delta(-u) by symmetry.
  double delta(double u) const;
  double varsigma(double u) const { return delta(-u); }

  // Second differences of log f on a grid over [-20, 20] scale units, all
  // <= 0 (the Laplace density is log-linear away from its kink).
  bool log_concave_on_grid() const;

 private:
  Family kind_ = Family::Gaussian;
  double scale_ = 1.0;
};

// E[g(U) | U <= w] for U drawn from `noise`, by quadrature in log space.
double expect_below(const NoiseFamily& noise, double w, const std::function<double(double)>& g);
// E[g(U) | U > w].
double expect_above(const NoiseFamily& noise, double w, const std::function<double(double)>& g);

}  // namespace ratbounds
