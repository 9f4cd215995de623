#include "gcrd/sources.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gcrd/errors.hpp"
#include "gcrd/specfun.hpp"

namespace gcrd {

namespace {

const double INF = std::numeric_limits<double>::infinity();
const double QNAN = std::numeric_limits<double>::quiet_NaN();

// E|W - 1|^3 for W ~ chi-square(1). Expanding |w-1|^3 over {w<1, w>1} and
// using E[W^k 1{W<1}] = 2^k Gamma(k+1/2)/Gamma(1/2) P(k+1/2, 1/2) gives a
// closed form in incomplete gammas; E[(W-1)^3] = 8.
double chi2_1_third_abs_central() {
  using specfun::reg_inc_gamma_lower;
  const double p0 = reg_inc_gamma_lower(0.5, 0.5);
  const double p1 = reg_inc_gamma_lower(1.5, 0.5);
  const double p2 = reg_inc_gamma_lower(2.5, 0.5);
  const double p3 = reg_inc_gamma_lower(3.5, 0.5);
  const double e0 = p0;
  const double e1 = 1.0 * p1;
  const double e2 = 3.0 * p2;
  const double e3 = 15.0 * p3;
  const double below = e3 - 3.0 * e2 + 3.0 * e1 - e0;  // E[(W-1)^3 1{W<1}]
  return 8.0 - 2.0 * below;
}

}  // namespace

double PowerDensity::log_pdf(double z) const {
  if (!(z > 0.0)) return -INF;
  return (shape - 1.0) * std::log(z) - z / scale - specfun::log_gamma(shape) -
         shape * std::log(scale);
}

double PowerDensity::pdf(double z) const { return std::exp(log_pdf(z)); }

double PowerDensity::cdf(double z) const {
  if (!(z > 0.0)) return 0.0;
  return specfun::reg_inc_gamma_lower(shape, z / scale);
}

double PowerDensity::upper(double z) const {
  if (!(z > 0.0)) return 1.0;
  return specfun::reg_inc_gamma_upper(shape, z / scale);
}

double PowerDensity::quantile(double p) const {
  return scale * specfun::inv_reg_inc_gamma_lower(shape, p);
}

SourceModel SourceModel::discrete(std::vector<double> support, std::vector<double> pmf) {
  if (support.empty() || support.size() != pmf.size())
    throw config_error("discrete source: support and pmf must be non-empty and equal length");
  double sum = 0.0;
  double sigma2 = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    if (!(pmf[i] >= 0.0)) throw config_error("discrete source: pmf entries must be >= 0");
    sum += pmf[i];
    sigma2 += pmf[i] * support[i] * support[i];
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw config_error("discrete source: pmf must sum to 1 within 1e-12");
  if (!(sigma2 > 0.0))
    throw config_error("discrete source: E[X^2] must be positive");
  SourceModel m;
  m.kind_ = SourceKind::Discrete;
  m.support_ = std::move(support);
  m.pmf_ = std::move(pmf);
  m.cdf_.resize(m.pmf_.size());
  std::partial_sum(m.pmf_.begin(), m.pmf_.end(), m.cdf_.begin());
  m.cdf_.back() = 1.0;
  return m;
}

SourceModel SourceModel::gaussian(double variance) {
  if (!(variance > 0.0)) throw config_error("gaussian source: variance must be positive");
  SourceModel m;
  m.kind_ = SourceKind::Gaussian;
  m.variance_ = variance;
  return m;
}

SourceModel SourceModel::rayleigh(double scale) {
  if (!(scale > 0.0)) throw config_error("rayleigh source: scale must be positive");
  SourceModel m;
  m.kind_ = SourceKind::Rayleigh;
  m.scale_ = scale;
  return m;
}

SourceModel SourceModel::custom(CustomSource spec) {
  if (!spec.sampler) throw config_error("custom source: sampler handle is required");
  SourceModel m;
  m.kind_ = SourceKind::Custom;
  m.custom_ = std::move(spec);
  return m;
}

MomentSummary SourceModel::moments() const {
  MomentSummary s;
  switch (kind_) {
    case SourceKind::Gaussian: {
      const double v = variance_;
      s.sigma2 = v;
      s.zeta = 3.0 * v * v;
      s.sixth = 15.0 * v * v * v;
      s.sixth_finite = true;
      s.third_abs_central = v * v * v * chi2_1_third_abs_central();
      break;
    }
    case SourceKind::Rayleigh: {
      // X^2 is exponential with mean 2 scale^2.
      const double mean = 2.0 * scale_ * scale_;
      s.sigma2 = mean;
      s.zeta = 2.0 * mean * mean;
      s.sixth = 6.0 * mean * mean * mean;
      s.sixth_finite = true;
      s.third_abs_central = mean * mean * mean * (12.0 / M_E - 2.0);
      break;
    }
    case SourceKind::Discrete: {
      double m2 = 0.0, m4 = 0.0, m6 = 0.0;
      for (std::size_t i = 0; i < support_.size(); ++i) {
        const double x2 = support_[i] * support_[i];
        m2 += pmf_[i] * x2;
        m4 += pmf_[i] * x2 * x2;
        m6 += pmf_[i] * x2 * x2 * x2;
      }
      double t3 = 0.0;
      for (std::size_t i = 0; i < support_.size(); ++i) {
        const double d = std::fabs(support_[i] * support_[i] - m2);
        t3 += pmf_[i] * d * d * d;
      }
      s.sigma2 = m2;
      s.zeta = m4;
      s.sixth = m6;
      s.sixth_finite = true;
      s.third_abs_central = t3;
      break;
    }
    case SourceKind::Custom: {
      if (!custom_.sigma2 || !custom_.zeta)
        throw capability_error("custom source: sigma2 and zeta moment handles are required");
      s.sigma2 = *custom_.sigma2;
      s.zeta = *custom_.zeta;
      s.sixth = custom_.sixth.value_or(QNAN);
      s.sixth_finite = custom_.sixth.has_value();
      s.third_abs_central = custom_.third_abs_central.value_or(QNAN);
      break;
    }
  }
  if (!(s.sigma2 > 0.0)) throw std::domain_error("moments: E[X^2] must be positive");
  if (s.zeta < s.sigma2 * s.sigma2 * (1.0 - 1e-12))
    throw std::domain_error("moments: E[X^4] < (E[X^2])^2 is impossible");
  s.var_x2 = s.zeta - s.sigma2 * s.sigma2;
  s.dispersion = s.var_x2 / (4.0 * s.sigma2 * s.sigma2);
  return s;
}

double SourceModel::cgf_x2(double theta) const {
  switch (kind_) {
    case SourceKind::Gaussian: {
      const double arg = 1.0 - 2.0 * theta * variance_;
      if (arg <= 0.0) return INF;
      return -0.5 * std::log(arg);
    }
    case SourceKind::Rayleigh: {
      const double mean = 2.0 * scale_ * scale_;
      const double arg = 1.0 - theta * mean;
      if (arg <= 0.0) return INF;
      return -std::log(arg);
    }
    case SourceKind::Discrete: {
      // Shift by the max exponent so large theta stays finite.
      double mx = -INF;
      for (double x : support_) mx = std::max(mx, theta * x * x);
      double acc = 0.0;
      for (std::size_t i = 0; i < support_.size(); ++i)
        acc += pmf_[i] * std::exp(theta * support_[i] * support_[i] - mx);
      return mx + std::log(acc);
    }
    case SourceKind::Custom:
      if (!custom_.cgf) throw capability_error("custom source: cgf handle is required");
      return custom_.cgf(theta);
  }
  return QNAN;
}

LegendrePoint SourceModel::legendre_x2(double t) const {
  const double sigma2 = moments().sigma2;
  if (t <= sigma2) return {t, 0.0, 0.0};

  // Essential supremum shortcut for finite-support sources.
  if (kind_ == SourceKind::Discrete) {
    double m2 = 0.0;
    for (double x : support_) m2 = std::max(m2, x * x);
    if (t > m2) return {t, INF, INF};
    if (t == m2) {
      double pmx = 0.0;
      for (std::size_t i = 0; i < support_.size(); ++i)
        if (support_[i] * support_[i] == m2) pmx += pmf_[i];
      return {t, INF, -std::log(pmx)};
    }
  }

  // Finiteness boundary of the CGF.
  double theta_max = INF;
  switch (kind_) {
    case SourceKind::Gaussian:
      theta_max = 1.0 / (2.0 * variance_);
      break;
    case SourceKind::Rayleigh:
      theta_max = 1.0 / (2.0 * scale_ * scale_);
      break;
    case SourceKind::Discrete:
      theta_max = INF;
      break;
    case SourceKind::Custom:
      if (custom_.theta_max) {
        theta_max = *custom_.theta_max;
      } else {
        // Doubling probe for the first infinite value, then bisect.
        double th = 1.0 / sigma2;
        int k = 0;
        while (std::isfinite(cgf_x2(th)) && k < 200) {
          th *= 2.0;
          ++k;
        }
        if (k < 200) {
          double lo = th / 2.0, hi = th;
          for (int i = 0; i < 120; ++i) {
            const double mid = 0.5 * (lo + hi);
            (std::isfinite(cgf_x2(mid)) ? lo : hi) = mid;
          }
          theta_max = lo;
        }
      }
      break;
  }

  auto phi = [&](double th) { return th * t - cgf_x2(th); };

  // Bracket the concave maximum.
  double hi;
  if (std::isfinite(theta_max)) {
    hi = theta_max * (1.0 - 1e-15);
  } else {
    hi = 1.0 / sigma2;
    int k = 0;
    while (phi(2.0 * hi) > phi(hi) && k < 300) {
      hi *= 2.0;
      ++k;
    }
    if (k == 300) return {t, INF, INF};  // still climbing: unbounded conjugate
    hi *= 2.0;
  }

  // Golden section on [0, hi] to |dtheta| <= 1e-12 relative.
  const double gr = 0.6180339887498949;
  double a = 0.0, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  while (b - a > 1e-12 * std::max(1.0, b)) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = phi(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = phi(x1);
    }
  }
  double theta = 0.5 * (a + b);
  double value = phi(theta);
  if (!(value > 0.0)) value = 0.0;  // sup over theta >= 0 includes theta = 0
  // A maximum pinned to the finiteness boundary is reported as the boundary.
  if (std::isfinite(theta_max) && theta > theta_max * (1.0 - 1e-9)) theta = theta_max;
  return {t, theta, value};
}

void SourceModel::fill_block(CounterRng& rng, std::span<double> out) const {
  switch (kind_) {
    case SourceKind::Gaussian: {
      const double sd = std::sqrt(variance_);
      for (double& v : out) v = sd * rng.next_normal();
      break;
    }
    case SourceKind::Rayleigh: {
      for (double& v : out) v = scale_ * std::sqrt(-2.0 * std::log(rng.next_unit()));
      break;
    }
    case SourceKind::Discrete: {
      for (double& v : out) {
        const double u = rng.next_unit_open();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const std::size_t idx = std::min<std::size_t>(it - cdf_.begin(), support_.size() - 1);
        v = support_[idx];
      }
      break;
    }
    case SourceKind::Custom:
      custom_.sampler(rng, out);
      break;
  }
}

std::vector<double> SourceModel::sample_block(int n, std::uint64_t seed, std::uint64_t stream) const {
  if (n < 1) throw std::invalid_argument("sample_block: n must be >= 1");
  std::vector<double> block(static_cast<std::size_t>(n));
  CounterRng rng(seed, stream);
  fill_block(rng, block);
  return block;
}

double SourceModel::sample_power(int n, std::uint64_t seed, std::uint64_t stream) const {
  if (n < 1) throw std::invalid_argument("sample_power: n must be >= 1");
  std::vector<double> block(static_cast<std::size_t>(n));
  CounterRng rng(seed, stream);
  fill_block(rng, block);
  double acc = 0.0;
  for (double v : block) acc += v * v;
  return acc / n;
}

std::optional<PowerDensity> SourceModel::power_density(int n) const {
  if (n < 1) throw std::invalid_argument("power_density: n must be >= 1");
  switch (kind_) {
    case SourceKind::Gaussian:
      return PowerDensity{0.5 * n, 2.0 * variance_ / n};
    case SourceKind::Rayleigh:
      return PowerDensity{static_cast<double>(n), 2.0 * scale_ * scale_ / n};
    default:
      return std::nullopt;
  }
}

}  // namespace gcrd
