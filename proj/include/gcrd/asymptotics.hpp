#pragma once

#include <span>
#include <vector>

#include "gcrd/shellprob.hpp"
#include "gcrd/sources.hpp"

namespace gcrd {

// One point of an ensemble excess-distortion exponent curve. alpha is the
// dominant source power solving rate = r_sp(alpha) (spherical) or
// rate = r_iid_star(alpha) (i.i.d.); it is NaN below the rate-distortion
// function where the exponent is identically zero. exponent may be +inf
// (rate pushes alpha beyond a bounded support).
struct ExponentPoint {
  double rate = 0.0;
  double alpha = 0.0;
  double exponent = 0.0;
  CodebookKind kind = CodebookKind::Spherical;
};

// Finite-blocklength codebook size target at excess probability epsilon:
// log_m = n * first_order + sqrt(n) * second_order + third_order_coeff * ln n.
struct SecondOrderPoint {
  int n = 0;
  double epsilon = 0.0;
  double log_m = 0.0;
  double first_order = 0.0;
  double second_order = 0.0;
  double third_order_coeff = 0.0;
};

// Rate-distortion function of the Gaussian codebook ensemble:
// (1/2) ln max(1, sigma2 / D).
double rd_function(double sigma2, double distortion);

// Excess-distortion dispersion (zeta - sigma2^2) / (4 sigma2^2) with
// zeta = E[X^4]; equals 1/2 for a Gaussian source.
double dispersion(double sigma2, double zeta);

// Moderate-deviations constant 1 / (2 * dispersion).
double md_constant(double sigma2, double zeta);

SecondOrderPoint second_order_logM(int n, double epsilon, double sigma2, double zeta,
                                   double distortion, double third_order_coeff = 0.0);

// Spherical-codebook coverage exponent -(1/2) ln(1 - h(z)) on (r1^2, r2^2).
double r_sp(const DistortionSetup& setup, double z);

// Optimal tilt of the i.i.d. coverage exponent, clamped at zero.
double s_star(const DistortionSetup& setup, double z);

// I.i.d.-codebook coverage exponent at tilt s.
double r_iid(const DistortionSetup& setup, double s, double z);

// Optimized i.i.d. coverage exponent r_iid(s_star(z), z).
double r_iid_star(const DistortionSetup& setup, double z);

// Second derivative of the tilted log-MGF behind upsilon's Bahadur-Rao
// prefactor.
double kappa(const DistortionSetup& setup, double s, double z);

// Inverts rate = r_sp / r_iid_star for the dominant power alpha >= sigma2.
// Requires rate >= rd_function.
double solve_alpha(const DistortionSetup& setup, double rate, CodebookKind kind);

// Ensemble excess-distortion exponent at the given rate: zero below the
// rate-distortion function, else the conjugate legendre_x2 evaluated at the
// dominant power.
ExponentPoint exponent(const SourceModel& model, const DistortionSetup& setup, double rate,
                       CodebookKind kind);

std::vector<ExponentPoint> exponent_curve(const SourceModel& model, const DistortionSetup& setup,
                                          std::span<const double> rates, CodebookKind kind);

// h(z) from shellprob, re-exported where the curve analysis lives.
double h_func(const DistortionSetup& setup, double z);

// The unique beta in (r1^2, |sigma2 - 2D|) with h(beta) = h(alpha), for
// alpha in [sigma2, r2^2). Requires sigma2 != 2D (the companion branch is
// empty otherwise).
double companion_beta(const DistortionSetup& setup, double alpha);

}  // namespace gcrd
