#pragma once

#include "gcrd/probability.hpp"

namespace gcrd {

enum class CodebookKind { Spherical, IidGaussian };
enum class ShellMethod { Exact, LowerBound, UpperBound, BahadurRao };

// Source power / distortion pair with the derived geometry constants:
// p_y = sigma2 - D is the codeword power, and [r1^2, r2^2] with
// r1 = sqrt(p_y) - sqrt(D), r2 = sqrt(p_y) + sqrt(D) is the band of source
// powers a spherical codeword can cover at all (r1 may be negative).
struct DistortionSetup {
  double sigma2;
  double distortion;
  double p_y;
  double r1;
  double r2;

  DistortionSetup(double sigma2_in, double distortion_in);
};

// Probability (exact value or bound) that one random codeword covers a
// source block of power z within distortion D, carried in both linear and
// log space. For method UpperBound the linear value saturates at 1 while
// log_value keeps the raw bound.
struct ShellProbability {
  double z = 0.0;
  Probability value;
  double log_value = 0.0;
  CodebookKind kind = CodebookKind::Spherical;
  ShellMethod method = ShellMethod::Exact;
};

// Exact single-codeword coverage probability for a codeword drawn uniformly
// on the sphere of radius sqrt(n p_y): zero outside sqrt(z) in [r1, r2], a
// symmetric regularized beta tail inside.
ShellProbability psi_spherical(const DistortionSetup& setup, int n, double z);

// Closed-form lower bound on psi_spherical; requires n >= 4 and
// z in [r1^2, r2^2].
ShellProbability g_lower(const DistortionSetup& setup, int n, double z);

// Closed-form upper bound on psi_spherical; requires n >= 4,
// z in [|sigma2 - 2D|, r2^2] and z + p_y - D >= 0.
ShellProbability g_upper(const DistortionSetup& setup, int n, double z);

// Exact coverage probability for an i.i.d. N(0, p_y) codeword: a noncentral
// chi-square CDF. Requires z >= 0.
ShellProbability upsilon_iid(const DistortionSetup& setup, int n, double z);

// Bahadur-Rao (exact-prefactor large deviations) approximation of
// upsilon_iid; requires the tilt s*(z) > 0, i.e. z > max(0, 2D - sigma2).
ShellProbability upsilon_bahadur_rao(const DistortionSetup& setup, int n, double z);

// h(z) = (z + p_y - D)^2 / (4 z p_y): equals 1 at z = r1^2 and r2^2, dips
// between them, and 1 - h(z) is the base of both closed-form bounds.
double power_ratio_h(const DistortionSetup& setup, double z);

// 1 - h(z) in the cancellation-free factored form
// (z - r1^2)(r2^2 - z) / (4 z p_y); negative outside the band.
double one_minus_h(const DistortionSetup& setup, double z);

}  // namespace gcrd
