#pragma once

namespace ratbounds {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // phi(0)
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;
inline constexpr double kPi = 3.14159265358979323846;

double std_normal_pdf(double x);
double std_normal_cdf(double x);
double log_std_normal_cdf(double x);

// Phi^{-1}(p) and its log-probability form for deep left tails.
double std_normal_quantile(double p);
double std_normal_quantile_from_log(double log_p);

// Mills ratio Phi(x)/phi(x).
double mills_ratio(double x);

// lambda(x) = phi(x)/Phi(x). Below x = -8 the continued fraction for the Mills
// ratio replaces the direct quotient.
double reversed_hazard(double x);
// x + lambda(x), free of cancellation in the left tail.
double reversed_hazard_shift(double x);
// lambda'(x) = -lambda(x) (x + lambda(x)).
double reversed_hazard_deriv(double x);

// Owen's T by adaptive quadrature of its defining integral.
double owens_t(double y, double a);

// 1/2 - T(y, nu)/Phi(y), which equals E[Phi(nu X) | X <= y] for standard X.
// For y >= 0 it is evaluated as 1/2 - lambda(y) I(y, nu)/sqrt(2 pi) with
// I(y, nu) = int_0^nu exp(-t^2 y^2/2)/(1+t^2) dt; for y < 0 the conditional
// expectation is integrated directly, so tiny values keep relative accuracy.
double s_tilde(double y, double nu);
// d/dy s_tilde = lambda(y) (Phi(nu y) - s_tilde(y, nu)).
double s_tilde_dy(double y, double nu);

// int phi(eta) Phi(a + b eta) d eta = Phi(a / sqrt(1 + b^2)).
double gauss_cdf_convolution(double a, double b);

}  // namespace ratbounds
