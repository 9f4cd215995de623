#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gcrd/rng.hpp"

namespace gcrd {

enum class SourceKind { Discrete, Gaussian, Rayleigh, Custom };

// Moments of X and X^2 that drive the asymptotic expressions. `dispersion`
// is Var[X^2] / (4 sigma^4); `third_abs_central` is E|X^2 - sigma^2|^3 (NaN
// when a custom model does not supply it); `sixth` guards a remainder-term
// assumption and is informational.
struct MomentSummary {
  double sigma2 = 0.0;
  double zeta = 0.0;  // E[X^4]
  double sixth = 0.0;
  bool sixth_finite = false;
  double third_abs_central = 0.0;
  double var_x2 = 0.0;
  double dispersion = 0.0;
};

// One point of the convex conjugate of the CGF of X^2:
// value = sup_{theta >= 0} { theta t - log E exp(theta X^2) }.
// theta_star and value may be +inf (t beyond the essential supremum).
struct LegendrePoint {
  double t = 0.0;
  double theta_star = 0.0;
  double value = 0.0;
};

// Analytic law of the block power Z = (1/n) sum X_i^2 when it is a Gamma
// distribution (Gaussian and Rayleigh sources).
struct PowerDensity {
  double shape = 0.0;
  double scale = 0.0;

  double log_pdf(double z) const;
  double pdf(double z) const;
  double cdf(double z) const;
  double upper(double z) const;  // 1 - cdf, full relative precision
  double quantile(double p) const;
};

// Hooks for a user-defined source. sampler fills a block of i.i.d. draws;
// cgf returns log E exp(theta X^2) (+inf outside the finiteness domain).
// sigma2 and zeta are required by everything downstream; the rest are
// optional refinements.
struct CustomSource {
  std::function<void(CounterRng&, std::span<double>)> sampler;
  std::function<double(double)> cgf;
  std::optional<double> sigma2;
  std::optional<double> zeta;
  std::optional<double> sixth;
  std::optional<double> third_abs_central;
  std::optional<double> theta_max;  // finiteness boundary of cgf, if known
};

class SourceModel {
 public:
  static SourceModel discrete(std::vector<double> support, std::vector<double> pmf);
  static SourceModel gaussian(double variance);
  static SourceModel rayleigh(double scale);
  static SourceModel custom(CustomSource spec);

  SourceKind kind() const { return kind_; }

  MomentSummary moments() const;

  // log E exp(theta X^2); +inf outside the finiteness domain.
  double cgf_x2(double theta) const;

  // Convex conjugate of cgf_x2 over theta >= 0, found numerically
  // (bracket expansion, then golden section).
  LegendrePoint legendre_x2(double t) const;

  std::vector<double> sample_block(int n, std::uint64_t seed, std::uint64_t stream = 0) const;
  double sample_power(int n, std::uint64_t seed, std::uint64_t stream = 0) const;

  // Law of the block power when available in closed form.
  std::optional<PowerDensity> power_density(int n) const;

  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& pmf() const { return pmf_; }
  double variance() const { return variance_; }
  double scale() const { return scale_; }

 private:
  SourceModel() = default;

  void fill_block(CounterRng& rng, std::span<double> out) const;

  SourceKind kind_ = SourceKind::Gaussian;
  std::vector<double> support_;
  std::vector<double> pmf_;
  std::vector<double> cdf_;  // cumulative pmf for inversion sampling
  double variance_ = 0.0;    // Gaussian parameter
  double scale_ = 0.0;       // Rayleigh parameter
  CustomSource custom_;
};

}  // namespace gcrd
