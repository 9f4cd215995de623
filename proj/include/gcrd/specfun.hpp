#pragma once

// Special-function kernel used by everything above it: log-gamma, regularized
// incomplete beta/gamma (linear and log domain), Gaussian tail Q and its
// inverse, and the noncentral chi-square CDF. Log-domain variants exist
// because shell probabilities routinely live at exp(-1500) where the linear
// values underflow.

namespace gcrd::specfun {

// ln Gamma(x), x > 0.
double log_gamma(double x);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double reg_inc_gamma_lower(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), full relative
// precision in the far upper tail.
double reg_inc_gamma_upper(double a, double x);

// ln P(a, x); relatively accurate even when P underflows.
double log_reg_inc_gamma_lower(double a, double x);

// Quantile of Gamma(a, 1): x with P(a, x) = p.
double inv_reg_inc_gamma_lower(double a, double p);

// Regularized incomplete beta I_x(a, b), a, b > 0, x in [0, 1].
double reg_inc_beta(double a, double b, double x);

// ln I_x(a, b); relatively accurate for tiny I_x.
double log_reg_inc_beta(double a, double b, double x);

// Gaussian upper tail Q(x) = 1 - Phi(x).
double q_func(double x);

// Inverse of q_func on (0, 1).
double q_inv(double p);

// CDF of the noncentral chi-square with dof degrees of freedom and
// noncentrality lambda, evaluated at x.
double noncentral_chi2_cdf(int dof, double lambda, double x);

// ln of the same, relatively accurate deep in the lower tail.
double noncentral_chi2_cdf_log(int dof, double lambda, double x);

}  // namespace gcrd::specfun
