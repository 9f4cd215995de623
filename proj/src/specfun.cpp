#include "gcrd/specfun.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace gcrd::specfun {

namespace {

constexpr double EPS = 1e-16;
constexpr double FPMIN = 1e-300;
constexpr int MAXIT = 2000000;
const double NEG_INF = -std::numeric_limits<double>::infinity();

// Series part of P(a, x): returns ln of sum_{k>=0} x^k / ((a+1)...(a+k)).
// Valid (and quickly convergent) for x < a + 1.
double gamma_series_log_sum(double a, double x) {
  double ap = a;
  double del = 1.0;
  double sum = 1.0;
  for (int i = 0; i < MAXIT; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * EPS) return std::log(sum);
  }
  throw std::runtime_error("gamma series failed to converge");
}

// Continued fraction for Q(a, x) by modified Lentz, valid for x >= a + 1.
// Returns ln Q(a, x).
double gamma_cf_log_upper(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / FPMIN;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= MAXIT; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < FPMIN) d = FPMIN;
    c = b + an / c;
    if (std::fabs(c) < FPMIN) c = FPMIN;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < EPS)
      return a * std::log(x) - x - log_gamma(a) + std::log(h);
  }
  throw std::runtime_error("gamma continued fraction failed to converge");
}

// Continued fraction for the incomplete beta (Lentz), usable when
// x < (a + 1) / (a + b + 2).
double betacf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < FPMIN) d = FPMIN;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= MAXIT; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < FPMIN) d = FPMIN;
    c = 1.0 + aa / c;
    if (std::fabs(c) < FPMIN) c = FPMIN;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < FPMIN) d = FPMIN;
    c = 1.0 + aa / c;
    if (std::fabs(c) < FPMIN) c = FPMIN;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < EPS) return h;
  }
  throw std::runtime_error("beta continued fraction failed to converge");
}

// ln I_x(a, b) through the direct continued-fraction branch; caller must
// ensure x < (a + 1) / (a + b + 2).
double log_inc_beta_direct(double a, double b, double x) {
  if (x <= 0.0) return NEG_INF;
  const double front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                       a * std::log(x) + b * std::log1p(-x);
  return front + std::log(betacf(a, b, x) / a);
}

// log(1 - exp(l)) for l <= 0 without cancellation.
double log1mexp(double l) {
  if (l >= 0.0) return NEG_INF;
  if (l > -0.6931471805599453)  // -ln 2
    return std::log(-std::expm1(l));
  return std::log1p(-std::exp(l));
}

double phi_inv_acklam(double p) {
  static const double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  const double phigh = 1.0 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
           ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
  }
  if (p <= phigh) {
    q = p - 0.5;
    r = q * q;
    return (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
           (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
  }
  q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
         ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  return std::lgamma(x);
}

double reg_inc_gamma_lower(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("reg_inc_gamma_lower: requires a > 0");
  if (!(x >= 0.0)) throw std::domain_error("reg_inc_gamma_lower: requires x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    const double lp = a * std::log(x) - x - log_gamma(a + 1.0) + gamma_series_log_sum(a, x);
    return lp >= 0.0 ? 1.0 : std::exp(lp);
  }
  const double lq = gamma_cf_log_upper(a, x);
  return -std::expm1(lq);
}

double reg_inc_gamma_upper(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("reg_inc_gamma_upper: requires a > 0");
  if (!(x >= 0.0)) throw std::domain_error("reg_inc_gamma_upper: requires x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) {
    const double lp = a * std::log(x) - x - log_gamma(a + 1.0) + gamma_series_log_sum(a, x);
    return -std::expm1(std::min(lp, 0.0));
  }
  const double lq = gamma_cf_log_upper(a, x);
  return lq >= 0.0 ? 1.0 : std::exp(lq);
}

double log_reg_inc_gamma_lower(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("log_reg_inc_gamma_lower: requires a > 0");
  if (!(x >= 0.0)) throw std::domain_error("log_reg_inc_gamma_lower: requires x >= 0");
  if (x == 0.0) return NEG_INF;
  if (x < a + 1.0) {
    const double lp = a * std::log(x) - x - log_gamma(a + 1.0) + gamma_series_log_sum(a, x);
    return std::min(lp, 0.0);
  }
  return log1mexp(gamma_cf_log_upper(a, x));
}

double inv_reg_inc_gamma_lower(double a, double p) {
  if (!(a > 0.0)) throw std::domain_error("inv_reg_inc_gamma_lower: requires a > 0");
  if (!(p >= 0.0 && p < 1.0))
    throw std::domain_error("inv_reg_inc_gamma_lower: requires p in [0, 1)");
  if (p == 0.0) return 0.0;

  // Wilson-Hilferty start, then safeguarded Newton on P(a, x) - p.
  const double z = -q_inv(p);
  const double t = 1.0 - 1.0 / (9.0 * a) + z * std::sqrt(1.0 / (9.0 * a));
  double x = a * t * t * t;
  if (!(x > 0.0)) x = a * std::exp((std::log(p) + log_gamma(a + 1.0)) / a);
  if (!(x > 0.0) || !std::isfinite(x)) x = a;

  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  const double lga = log_gamma(a);
  for (int it = 0; it < 100; ++it) {
    const double f = reg_inc_gamma_lower(a, x) - p;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    const double logpdf = (a - 1.0) * std::log(x) - x - lga;
    double step = f * std::exp(-logpdf);
    double xn = x - step;
    if (!(xn > lo && (xn < hi))) xn = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * x;
    if (std::fabs(xn - x) <= 1e-14 * std::fabs(x)) return xn;
    x = xn;
  }
  return x;
}

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("reg_inc_beta: requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("reg_inc_beta: requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lfront = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                        a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double v = std::exp(lfront) * betacf(a, b, x) / a;
    return v > 1.0 ? 1.0 : v;
  }
  const double v = 1.0 - std::exp(lfront) * betacf(b, a, 1.0 - x) / b;
  return v < 0.0 ? 0.0 : v;
}

double log_reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("log_reg_inc_beta: requires a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("log_reg_inc_beta: requires x in [0, 1]");
  if (x == 0.0) return NEG_INF;
  if (x == 1.0) return 0.0;
  if (x < (a + 1.0) / (a + b + 2.0)) {
    const double l = log_inc_beta_direct(a, b, x);
    return std::min(l, 0.0);
  }
  return log1mexp(log_inc_beta_direct(b, a, 1.0 - x));
}

double q_func(double x) { return 0.5 * std::erfc(x * 0.7071067811865475244); }

double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: requires p in (0, 1)");
  double x = -phi_inv_acklam(p);
  // Two Newton polish steps: d/dx Q(x) = -phi(x).
  for (int i = 0; i < 2; ++i) {
    const double f = q_func(x) - p;
    const double pdf = 0.3989422804014326779 * std::exp(-0.5 * x * x);
    if (pdf <= 0.0) break;
    x += f / pdf;
  }
  return x;
}

double noncentral_chi2_cdf_log(int dof, double lambda, double x) {
  if (dof < 1) throw std::domain_error("noncentral_chi2_cdf: requires dof >= 1");
  if (!(lambda >= 0.0)) throw std::domain_error("noncentral_chi2_cdf: requires lambda >= 0");
  if (!(x >= 0.0)) throw std::domain_error("noncentral_chi2_cdf: requires x >= 0");
  if (x == 0.0) return NEG_INF;

  const double half_dof = 0.5 * dof;
  const double hx = 0.5 * x;
  const double hl = 0.5 * lambda;
  if (hl == 0.0) return log_reg_inc_gamma_lower(half_dof, hx);

  const double loghl = std::log(hl);
  auto log_term = [&](long j) {
    const double lpois = -hl + j * loghl - log_gamma(static_cast<double>(j) + 1.0);
    return lpois + log_reg_inc_gamma_lower(half_dof + static_cast<double>(j), hx);
  };

  // The summand w_j * P(dof/2 + j, x/2) peaks near j solving
  // j (j + dof/2) = lambda x / 4, which for x << dof/2 + lambda/2 sits far
  // left of the Poisson mode; starting there keeps the log result relatively
  // accurate instead of merely absolutely accurate.
  const double jprod = 0.5 * (-half_dof + std::sqrt(half_dof * half_dof + lambda * x));
  long j0 = std::lround(std::max(0.0, std::min(jprod, std::floor(hl))));

  // Streaming log-sum-exp with a running max.
  double m = log_term(j0);
  double s = 1.0;
  double peak = m;
  auto accumulate = [&](double l) {
    if (l > peak) peak = l;
    if (l <= m) {
      s += std::exp(l - m);
    } else {
      s = s * std::exp(m - l) + 1.0;
      m = l;
    }
  };

  // Expand until terms sit 70 nats below the running peak for 6 consecutive
  // steps. Past the summand's (unimodal) peak the term ratio keeps falling,
  // so the dropped tail is geometrically dominated: its residual is far
  // below both 1e-14 absolute Poisson mass and 1e-15 relative to the sum.
  const double drop = 70.0;
  const int patience = 6;

  int quiet = 0;
  for (long j = j0 + 1;; ++j) {
    const double l = log_term(j);
    accumulate(l);
    quiet = (l < peak - drop) ? quiet + 1 : 0;
    if (quiet >= patience) break;
    if (j - j0 > MAXIT) throw std::runtime_error("noncentral chi2: series too long");
  }
  quiet = 0;
  for (long j = j0 - 1; j >= 0; --j) {
    const double l = log_term(j);
    accumulate(l);
    quiet = (l < peak - drop) ? quiet + 1 : 0;
    if (quiet >= patience) break;
  }

  const double total = m + std::log(s);
  return std::min(total, 0.0);
}

double noncentral_chi2_cdf(int dof, double lambda, double x) {
  if (dof < 1) throw std::domain_error("noncentral_chi2_cdf: requires dof >= 1");
  if (!(lambda >= 0.0)) throw std::domain_error("noncentral_chi2_cdf: requires lambda >= 0");
  if (!(x >= 0.0)) throw std::domain_error("noncentral_chi2_cdf: requires x >= 0");
  if (x == 0.0) return 0.0;
  if (lambda == 0.0) return reg_inc_gamma_lower(0.5 * dof, 0.5 * x);
  const double l = noncentral_chi2_cdf_log(dof, lambda, x);
  return l >= 0.0 ? 1.0 : std::exp(l);
}

}  // namespace gcrd::specfun
