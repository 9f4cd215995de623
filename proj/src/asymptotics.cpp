#include "gcrd/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gcrd/errors.hpp"
#include "gcrd/specfun.hpp"

namespace gcrd {

namespace {
const double INF = std::numeric_limits<double>::infinity();
const double QNAN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

double rd_function(double sigma2, double distortion) {
  if (!(sigma2 > 0.0)) throw std::domain_error("rd_function: sigma2 must be positive");
  if (!(distortion > 0.0)) throw std::domain_error("rd_function: distortion must be positive");
  if (distortion >= sigma2) return 0.0;
  return 0.5 * std::log(sigma2 / distortion);
}

double dispersion(double sigma2, double zeta) {
  if (!(sigma2 > 0.0)) throw std::domain_error("dispersion: sigma2 must be positive");
  const double v = (zeta - sigma2 * sigma2) / (4.0 * sigma2 * sigma2);
  if (v < 0.0) throw std::domain_error("dispersion: zeta < sigma2^2 is impossible");
  return v;
}

double md_constant(double sigma2, double zeta) {
  const double v = dispersion(sigma2, zeta);
  if (v == 0.0) throw std::domain_error("md_constant: dispersion is zero (degenerate power law)");
  return 1.0 / (2.0 * v);
}

SecondOrderPoint second_order_logM(int n, double epsilon, double sigma2, double zeta,
                                   double distortion, double third_order_coeff) {
  if (n < 1) throw std::domain_error("second_order_logM: n must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("second_order_logM: epsilon must lie in (0, 1)");
  if (!(distortion > 0.0 && distortion < sigma2))
    throw std::domain_error("second_order_logM: distortion must lie in (0, sigma2)");
  SecondOrderPoint p;
  p.n = n;
  p.epsilon = epsilon;
  p.first_order = rd_function(sigma2, distortion);
  p.second_order = std::sqrt(dispersion(sigma2, zeta)) * specfun::q_inv(epsilon);
  p.third_order_coeff = third_order_coeff;
  p.log_m = n * p.first_order + std::sqrt(static_cast<double>(n)) * p.second_order +
            third_order_coeff * std::log(static_cast<double>(n));
  return p;
}

double h_func(const DistortionSetup& setup, double z) { return power_ratio_h(setup, z); }

double r_sp(const DistortionSetup& setup, double z) {
  const double lo = setup.r1 * setup.r1;
  const double hi = setup.r2 * setup.r2;
  if (!(z > lo && z < hi))
    throw std::domain_error("r_sp: requires z in (r1^2, r2^2)");
  const double base = one_minus_h(setup, z);
  if (!(base > 0.0)) throw std::domain_error("r_sp: h(z) >= 1 inside the band (rounding)");
  return -0.5 * std::log(base);
}

double s_star(const DistortionSetup& setup, double z) {
  if (!(z >= 0.0)) throw std::domain_error("s_star: requires z >= 0");
  const double d = setup.distortion;
  const double s2 = setup.sigma2;
  const double root = std::sqrt((s2 - d) * (s2 - d) + 4.0 * z * d);
  return std::max(0.0, (s2 - 3.0 * d + root) / (4.0 * d));
}

double r_iid(const DistortionSetup& setup, double s, double z) {
  if (!(s >= 0.0)) throw std::domain_error("r_iid: requires s >= 0");
  if (!(z >= 0.0)) throw std::domain_error("r_iid: requires z >= 0");
  const double opts = 1.0 + 2.0 * s;
  return 0.5 * std::log(opts) + s * z / (opts * setup.p_y) - s * setup.distortion / setup.p_y;
}

double r_iid_star(const DistortionSetup& setup, double z) {
  return r_iid(setup, s_star(setup, z), z);
}

double kappa(const DistortionSetup& setup, double s, double z) {
  if (!(s >= 0.0)) throw std::domain_error("kappa: requires s >= 0");
  if (!(z >= 0.0)) throw std::domain_error("kappa: requires z >= 0");
  const double opts = 1.0 + 2.0 * s;
  return 2.0 * (setup.p_y * opts + 2.0 * z) / (setup.p_y * opts * opts * opts);
}

double solve_alpha(const DistortionSetup& setup, double rate, CodebookKind kind) {
  const double rd = rd_function(setup.sigma2, setup.distortion);
  if (!(rate >= rd)) throw std::domain_error("solve_alpha: requires rate >= rd_function");
  if (rate == rd) return setup.sigma2;

  if (kind == CodebookKind::Spherical) {
    // r_sp blows up at r2^2, so bisect in w = -ln(r2^2 - z) where the
    // approach to the pole is linear. The rate is evaluated from w through
    // the factored 1 - h, never materializing z, so w beyond the point
    // where r2^2 - z underflows into z == r2^2 still works.
    const double hi_z = setup.r2 * setup.r2;
    const double lo_z = setup.r1 * setup.r1;
    auto rate_at = [&](double w) {
      const double eps = std::exp(-w);  // r2^2 - z
      const double base = (hi_z - lo_z - eps) * eps / (4.0 * (hi_z - eps) * setup.p_y);
      return -0.5 * std::log(base);
    };
    double wlo = -std::log(hi_z - setup.sigma2);
    double whi = wlo + 1.0;
    int k = 0;
    while (rate_at(whi) < rate) {
      whi += std::max(1.0, whi - wlo);
      if (++k > 60 || whi > 700.0)
        throw std::domain_error("solve_alpha: rate too large to bracket near r2^2");
    }
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (wlo + whi);
      (rate_at(mid) < rate ? wlo : whi) = mid;
    }
    double alpha = hi_z - std::exp(-0.5 * (wlo + whi));
    if (alpha >= hi_z) alpha = std::nextafter(hi_z, 0.0);
    return alpha;
  }

  // r_iid_star is increasing and unbounded on [sigma2, inf).
  double lo = setup.sigma2;
  double hi = 2.0 * setup.sigma2;
  int k = 0;
  while (r_iid_star(setup, hi) < rate) {
    hi *= 2.0;
    if (++k > 200) throw std::domain_error("solve_alpha: failed to bracket rate");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (r_iid_star(setup, mid) < rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ExponentPoint exponent(const SourceModel& model, const DistortionSetup& setup, double rate,
                       CodebookKind kind) {
  const MomentSummary mom = model.moments();
  if (std::fabs(mom.sigma2 - setup.sigma2) > 1e-9)
    throw config_error("exponent: source sigma2 and setup sigma2 disagree beyond 1e-9");
  ExponentPoint p;
  p.rate = rate;
  p.kind = kind;
  const double rd = rd_function(setup.sigma2, setup.distortion);
  if (rate < rd) {
    p.alpha = QNAN;
    p.exponent = 0.0;
    return p;
  }
  p.alpha = solve_alpha(setup, rate, kind);
  p.exponent = model.legendre_x2(p.alpha).value;
  return p;
}

std::vector<ExponentPoint> exponent_curve(const SourceModel& model, const DistortionSetup& setup,
                                          std::span<const double> rates, CodebookKind kind) {
  std::vector<ExponentPoint> out;
  out.reserve(rates.size());
  for (double r : rates) out.push_back(exponent(model, setup, r, kind));
  return out;
}

double companion_beta(const DistortionSetup& setup, double alpha) {
  const double lo = setup.r1 * setup.r1;
  const double band = std::fabs(setup.sigma2 - 2.0 * setup.distortion);
  if (!(band > lo))
    throw std::domain_error("companion_beta: decreasing branch is empty (sigma2 == 2D)");
  if (!(alpha >= setup.sigma2 && alpha < setup.r2 * setup.r2))
    throw std::domain_error("companion_beta: requires alpha in [sigma2, r2^2)");
  const double target = power_ratio_h(setup, alpha);
  // h is decreasing on (r1^2, band] from 1 down to h(band) < h(alpha).
  double a = lo, b = band;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (a + b);
    if (power_ratio_h(setup, mid) > target)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

}  // namespace gcrd
