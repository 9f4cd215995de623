#include "gcrd/shellprob.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gcrd/asymptotics.hpp"
#include "gcrd/specfun.hpp"

namespace gcrd {

namespace {
const double NEG_INF = -std::numeric_limits<double>::infinity();
constexpr double HALF_LOG_PI = 0.5723649429247001;

ShellProbability make(double z, double log_value, CodebookKind kind, ShellMethod method) {
  ShellProbability r;
  r.z = z;
  r.log_value = log_value;
  r.value = Probability::from_log(log_value);
  r.kind = kind;
  r.method = method;
  return r;
}
}  // namespace

DistortionSetup::DistortionSetup(double sigma2_in, double distortion_in)
    : sigma2(sigma2_in), distortion(distortion_in) {
  if (!(sigma2 > 0.0)) throw std::domain_error("DistortionSetup: sigma2 must be positive");
  if (!(distortion > 0.0 && distortion < sigma2))
    throw std::domain_error("DistortionSetup: distortion must lie in (0, sigma2)");
  p_y = sigma2 - distortion;
  r1 = std::sqrt(p_y) - std::sqrt(distortion);
  r2 = std::sqrt(p_y) + std::sqrt(distortion);
}

double power_ratio_h(const DistortionSetup& setup, double z) {
  if (!(z > 0.0)) throw std::domain_error("power_ratio_h: requires z > 0");
  const double num = z + setup.p_y - setup.distortion;
  return num * num / (4.0 * z * setup.p_y);
}

double one_minus_h(const DistortionSetup& setup, double z) {
  if (!(z > 0.0)) throw std::domain_error("one_minus_h: requires z > 0");
  return (z - setup.r1 * setup.r1) * (setup.r2 * setup.r2 - z) / (4.0 * z * setup.p_y);
}

ShellProbability psi_spherical(const DistortionSetup& setup, int n, double z) {
  if (n < 2) throw std::domain_error("psi_spherical: requires n >= 2");
  if (!(z > 0.0)) throw std::domain_error("psi_spherical: requires z > 0");
  const double sz = std::sqrt(z);
  // Hard zero region first, before any cancellation can blur the boundary.
  if (sz < setup.r1 || sz > setup.r2)
    return make(z, NEG_INF, CodebookKind::Spherical, ShellMethod::Exact);

  // Projection threshold of the covering cap: Y_1 / sqrt(n p_y) >= u0.
  const double u0 = (z + setup.p_y - setup.distortion) / (2.0 * std::sqrt(z * setup.p_y));
  if (u0 >= 1.0) return make(z, NEG_INF, CodebookKind::Spherical, ShellMethod::Exact);
  if (u0 <= -1.0) return make(z, 0.0, CodebookKind::Spherical, ShellMethod::Exact);

  // (1 + U)/2 is Beta((n-1)/2, (n-1)/2), so the upper tail at u0 is the
  // regularized beta at (1 - u0)/2 by symmetry.
  const double a = 0.5 * (n - 1);
  const double lv = specfun::log_reg_inc_beta(a, a, 0.5 * (1.0 - u0));
  return make(z, lv, CodebookKind::Spherical, ShellMethod::Exact);
}

ShellProbability g_lower(const DistortionSetup& setup, int n, double z) {
  if (n < 4) throw std::domain_error("g_lower: requires n >= 4");
  if (!(z > 0.0) || z < setup.r1 * setup.r1 || z > setup.r2 * setup.r2)
    throw std::domain_error("g_lower: requires z in [r1^2, r2^2]");
  double base = one_minus_h(setup, z);
  if (base <= 0.0) return make(z, NEG_INF, CodebookKind::Spherical, ShellMethod::LowerBound);
  const double lv = specfun::log_gamma(0.5 * (n + 2)) - specfun::log_gamma(0.5 * (n + 1)) -
                    HALF_LOG_PI - std::log(static_cast<double>(n)) +
                    0.5 * (n - 1) * std::log(base);
  return make(z, lv, CodebookKind::Spherical, ShellMethod::LowerBound);
}

ShellProbability g_upper(const DistortionSetup& setup, int n, double z) {
  if (n < 4) throw std::domain_error("g_upper: requires n >= 4");
  const double band = std::fabs(setup.sigma2 - 2.0 * setup.distortion);
  if (!(z >= band) || !(z + setup.p_y - setup.distortion >= 0.0))
    throw std::domain_error("g_upper: requires z >= |sigma2 - 2D|");
  if (z > setup.r2 * setup.r2) throw std::domain_error("g_upper: requires z <= r2^2");
  double base = one_minus_h(setup, z);
  if (base <= 0.0) return make(z, NEG_INF, CodebookKind::Spherical, ShellMethod::UpperBound);
  const double lv = -HALF_LOG_PI + specfun::log_gamma(0.5 * n) - specfun::log_gamma(0.5 * (n - 1)) +
                    0.5 * (n - 3) * std::log(base);
  return make(z, lv, CodebookKind::Spherical, ShellMethod::UpperBound);
}

ShellProbability upsilon_iid(const DistortionSetup& setup, int n, double z) {
  if (n < 1) throw std::domain_error("upsilon_iid: requires n >= 1");
  if (!(z >= 0.0)) throw std::domain_error("upsilon_iid: requires z >= 0");
  // (Y_i - sqrt(z))/sqrt(p_y) are unit normals at mean -sqrt(z/p_y), so the
  // squared distance is p_y/n times a noncentral chi-square.
  const double lv = specfun::noncentral_chi2_cdf_log(n, n * z / setup.p_y,
                                                     n * setup.distortion / setup.p_y);
  return make(z, lv, CodebookKind::IidGaussian, ShellMethod::Exact);
}

ShellProbability upsilon_bahadur_rao(const DistortionSetup& setup, int n, double z) {
  if (n < 1) throw std::domain_error("upsilon_bahadur_rao: requires n >= 1");
  const double s = s_star(setup, z);
  if (!(s > 0.0))
    throw std::domain_error("upsilon_bahadur_rao: requires s*(z) > 0 (z > max(0, 2D - sigma2))");
  const double k = kappa(setup, s, z);
  const double lv = -n * r_iid(setup, s, z) - std::log(s) -
                    0.5 * std::log(2.0 * M_PI * n * k);
  return make(z, lv, CodebookKind::IidGaussian, ShellMethod::BahadurRao);
}

}  // namespace gcrd
