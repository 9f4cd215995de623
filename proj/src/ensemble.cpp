#include "gcrd/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gcrd/asymptotics.hpp"
#include "gcrd/errors.hpp"
#include "gcrd/rng.hpp"

namespace gcrd {

namespace {

const double INF = std::numeric_limits<double>::infinity();
const double NEG_INF = -std::numeric_limits<double>::infinity();

double log1mexp(double l) {
  if (l >= 0.0) return NEG_INF;
  if (l > -0.6931471805599453) return std::log(-std::expm1(l));
  return std::log1p(-std::exp(l));
}

// (1 - P)^M from ln P and ln M, without ever leaving log space until the
// final exp. Exact 0 when the exponent underflows, exact 1 when P = 0.
double codebook_miss_weight(double log_m, double log_p) {
  if (log_p == NEG_INF) return 1.0;
  if (log_p >= 0.0) return 0.0;
  const double l = log1mexp(log_p);  // ln(1 - P) < 0
  if (l == 0.0) return 1.0;
  const double t = log_m + std::log(-l);  // ln(M * -ln(1-P))
  if (t > 709.0) return 0.0;
  return std::exp(-std::exp(t));
}

struct MeanAccum {
  double sw = 0.0;
  double sw2 = 0.0;
  long count = 0;
};

// Shell probability in log space for the plan's codebook kind, hardened for
// the z = 0 corner a discrete atom at zero can produce.
double shell_log_value(const DistortionSetup& setup, int n, double z, CodebookKind kind) {
  if (kind == CodebookKind::IidGaussian) return upsilon_iid(setup, n, z).log_value;
  if (z <= 0.0) {
    // A zero block sits at distance exactly p_y from every spherical codeword.
    return setup.p_y <= setup.distortion ? 0.0 : NEG_INF;
  }
  return psi_spherical(setup, n, z).log_value;
}

// Fixed-size chunks combined in index order: the result is identical no
// matter how many workers ran them.
template <typename ChunkFn>
MeanAccum run_chunked(long total, long chunk, int workers, ChunkFn fn) {
  const long nchunks = (total + chunk - 1) / chunk;
  std::vector<MeanAccum> parts(static_cast<std::size_t>(nchunks));
  if (workers <= 1) {
    for (long c = 0; c < nchunks; ++c)
      parts[static_cast<std::size_t>(c)] = fn(c * chunk, std::min(total, (c + 1) * chunk));
  } else {
    std::vector<std::future<void>> futs;
    std::atomic<long> next{0};
    const long nw = std::min<long>(workers, nchunks);
    for (long w = 0; w < nw; ++w) {
      futs.push_back(std::async(std::launch::async, [&]() {
        for (;;) {
          const long c = next.fetch_add(1);
          if (c >= nchunks) return;
          parts[static_cast<std::size_t>(c)] = fn(c * chunk, std::min(total, (c + 1) * chunk));
        }
      }));
    }
    for (auto& f : futs) f.get();
  }
  MeanAccum out;
  for (const MeanAccum& p : parts) {
    out.sw += p.sw;
    out.sw2 += p.sw2;
    out.count += p.count;
  }
  return out;
}

void finalize_mc(EnsembleEstimate& est, const MeanAccum& acc) {
  const double nn = static_cast<double>(acc.count);
  est.value = acc.sw / nn;
  double var = (acc.sw2 - acc.sw * acc.sw / nn) / (nn - 1.0);
  if (!(var > 0.0)) var = 0.0;
  est.std_error = std::sqrt(var / nn);
  if (est.std_error == 0.0) est.std_error = 1.0 / nn;
}

// ---- adaptive Gauss-Kronrod 15(7) ----

struct Segment {
  double a, b, integral, error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  static const double XK[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                               0.741531185599394, 0.586087235467691, 0.405845151377397,
                               0.207784955007898, 0.0};
  static const double WK[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                               0.140653259715525, 0.169004726639267, 0.190350578064785,
                               0.204432940075298, 0.209482141084728};
  static const double WG[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                               0.417959183673469};
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fk[15];
  for (int i = 0; i < 7; ++i) {
    fk[i] = f(c - h * XK[i]);
    fk[14 - i] = f(c + h * XK[i]);
  }
  fk[7] = f(c);
  double ik = 0.0;
  for (int i = 0; i < 7; ++i) ik += WK[i] * (fk[i] + fk[14 - i]);
  ik += WK[7] * fk[7];
  ik *= h;
  double ig = 0.0;
  for (int i = 0; i < 3; ++i) ig += WG[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);
  ig += WG[3] * fk[7];
  ig *= h;
  return {a, b, ik, std::fabs(ik - ig)};
}

// Integrates f over [a, b] until the error estimate drops below
// rel_tol * (|I| + context), where context carries the other exactly-known
// contributions to the final probability so relative control is on the
// answer, not the slice.
double gk_adaptive(const std::function<double(double)>& f, double a, double b, double rel_tol,
                   double context) {
  if (!(b > a)) return 0.0;
  std::vector<Segment> segs{gk15(f, a, b)};
  for (int iter = 0; iter < 4000; ++iter) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      total += segs[i].integral;
      err += segs[i].error;
      if (segs[i].error > segs[worst].error) worst = i;
    }
    if (err <= rel_tol * (std::fabs(total) + context) + 1e-300) return total;
    const Segment s = segs[worst];
    const double mid = 0.5 * (s.a + s.b);
    segs[worst] = gk15(f, s.a, mid);
    segs.push_back(gk15(f, mid, s.b));
  }
  throw std::runtime_error("pe_quadrature: adaptive integration failed to converge");
}

// Bisects for the z in [lo, hi] where the monotone map g crosses `target`.
// `decreasing` gives the direction of g.
double bisect_crossing(const std::function<double(double)>& g, double lo, double hi, double target,
                       bool decreasing) {
  for (int i = 0; i < 120; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double v = g(mid);
    const bool above = v > target;
    if (above == decreasing)
      lo = mid;  // still above target on the falling side
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void validate_plan(const SimPlan& plan) {
  if (plan.n < 1) throw std::domain_error("SimPlan: n must be >= 1");
  if (!(plan.log_m >= 0.0)) throw std::domain_error("SimPlan: log_m must be >= 0");
  if (plan.samples < 100) throw std::domain_error("SimPlan: samples must be >= 100");
}

void check_sigma2(const SourceModel& model, const DistortionSetup& setup) {
  if (std::fabs(model.moments().sigma2 - setup.sigma2) > 1e-9)
    throw config_error("ensemble: source sigma2 and setup sigma2 disagree beyond 1e-9");
}

}  // namespace

EnsembleEstimate pe_conditional(const SourceModel& model, const DistortionSetup& setup,
                                const SimPlan& plan) {
  validate_plan(plan);
  check_sigma2(model, setup);
  std::optional<PowerDensity> density;
  if (plan.stratified) {
    density = model.power_density(plan.n);
    if (!density)
      throw capability_error(
          "pe_conditional: stratified sampling needs an analytic power density for this source");
  }

  auto chunk_fn = [&](long begin, long end) {
    MeanAccum acc;
    for (long i = begin; i < end; ++i) {
      double z;
      if (plan.stratified) {
        CounterRng rng(plan.seed, static_cast<std::uint64_t>(i));
        const double u = (static_cast<double>(i) + rng.next_unit_open()) /
                         static_cast<double>(plan.samples);
        z = density->quantile(u);
      } else {
        z = model.sample_power(plan.n, plan.seed, static_cast<std::uint64_t>(i));
      }
      const double lp = shell_log_value(setup, plan.n, z, plan.kind);
      const double w = codebook_miss_weight(plan.log_m, lp);
      acc.sw += w;
      acc.sw2 += w * w;
      ++acc.count;
    }
    return acc;
  };

  const MeanAccum acc = run_chunked(plan.samples, 4096, plan.worker_streams, chunk_fn);
  EnsembleEstimate est;
  est.method = EstimateMethod::Conditional;
  est.n = plan.n;
  est.log_m = plan.log_m;
  est.kind = plan.kind;
  est.seed = plan.seed;
  finalize_mc(est, acc);
  return est;
}

EnsembleEstimate pe_quadrature(const SourceModel& model, const DistortionSetup& setup,
                               const SimPlan& plan) {
  validate_plan(plan);
  check_sigma2(model, setup);
  const std::optional<PowerDensity> density = model.power_density(plan.n);
  if (!density)
    throw capability_error(
        "pe_quadrature: no analytic power density for this source; use the conditional method");

  const int n = plan.n;
  const double log_m = plan.log_m;
  const double delta_log = std::log(1e-9);

  std::function<double(double)> mlog = [&](double z) {
    return log_m + shell_log_value(setup, n, z, plan.kind);
  };
  std::function<double(double)> integrand = [&](double z) {
    const double w = codebook_miss_weight(log_m, shell_log_value(setup, n, z, plan.kind));
    return w <= 0.0 ? 0.0 : w * density->pdf(z);
  };

  double value;
  if (plan.kind == CodebookKind::Spherical) {
    const double lo = setup.r1 > 0.0 ? setup.r1 * setup.r1 : 0.0;
    const double hi = setup.r2 * setup.r2;
    const double band = std::fabs(setup.sigma2 - 2.0 * setup.distortion);
    const bool two_branch = setup.r1 > 0.0;
    const double m_band = mlog(std::max(band, 1e-300));

    // Upper transition: past z_c the miss weight is 1 up to O(1e-9).
    const double z_c = (m_band <= delta_log) ? band : bisect_crossing(mlog, band, hi, delta_log, true);
    const double tail = density->upper(z_c);

    double head = 0.0;
    double z_b = setup.r1 * setup.r1;  // also the sure-coverage edge when r1 < 0
    if (two_branch) {
      z_b = (m_band <= delta_log) ? band : bisect_crossing(mlog, lo, band, delta_log, false);
      head = density->cdf(z_b);
    }

    const double pfloor = std::max(head + tail, 1e-300);
    const double drop_lin = std::max(30.0, -std::log(pfloor) + 27.7);
    const double drop_log = std::log(drop_lin);

    if (two_branch) {
      const double z_d_lo =
          (m_band <= drop_log) ? band : bisect_crossing(mlog, z_b, band, drop_log, false);
      const double z_d_up =
          (m_band <= drop_log) ? band : bisect_crossing(mlog, band, z_c, drop_log, true);
      const double i1 = gk_adaptive(integrand, z_b, z_d_lo, 1e-9, pfloor);
      const double i2 = gk_adaptive(integrand, z_d_up, z_c, 1e-9, pfloor);
      value = head + i1 + i2 + tail;
    } else {
      const double m_at_b = mlog(std::max(z_b, 1e-300) * (1.0 + 1e-12) + 1e-300);
      const double z_d =
          (m_at_b <= drop_log) ? z_b : bisect_crossing(mlog, z_b, z_c, drop_log, true);
      const double i1 = gk_adaptive(integrand, z_d, z_c, 1e-9, pfloor);
      value = i1 + tail;
    }
  } else {
    // Upsilon is decreasing on [0, inf); bracket the 1e-9 crossing upward.
    double z_hi = 2.0 * setup.sigma2;
    int k = 0;
    while (mlog(z_hi) > delta_log) {
      z_hi *= 2.0;
      if (++k > 300) throw std::runtime_error("pe_quadrature: failed to bracket the transition");
    }
    const double m0 = mlog(0.0);
    const double z_c = (m0 <= delta_log) ? 0.0 : bisect_crossing(mlog, 0.0, z_hi, delta_log, true);
    const double tail = density->upper(z_c);
    const double pfloor = std::max(tail, 1e-300);
    const double drop_lin = std::max(30.0, -std::log(pfloor) + 27.7);
    const double drop_log = std::log(drop_lin);
    const double z_d = (m0 <= drop_log) ? 0.0 : bisect_crossing(mlog, 0.0, z_c, drop_log, true);
    const double i1 = gk_adaptive(integrand, z_d, z_c, 1e-9, pfloor);
    value = i1 + tail;
  }

  EnsembleEstimate est;
  est.value = std::min(1.0, std::max(0.0, value));
  est.std_error = 0.0;
  est.method = EstimateMethod::Quadrature;
  est.n = n;
  est.log_m = log_m;
  est.kind = plan.kind;
  est.seed = plan.seed;
  return est;
}

EnsembleEstimate pe_direct(const SourceModel& model, const DistortionSetup& setup, int n,
                           int m_count, long trials, std::uint64_t seed, CodebookKind kind) {
  if (n < 1) throw std::domain_error("pe_direct: n must be >= 1");
  if (m_count < 1) throw std::domain_error("pe_direct: m_count must be >= 1");
  if (m_count > (1 << 20))
    throw resource_error("pe_direct: m_count above 2^20; use pe_conditional for larger codebooks");
  if (trials < 1) throw std::domain_error("pe_direct: trials must be >= 1");
  check_sigma2(model, setup);

  const double radius2 = n * setup.p_y;
  const double sqrt_py = std::sqrt(setup.p_y);

  auto chunk_fn = [&](long begin, long end) {
    MeanAccum acc;
    std::vector<double> x(static_cast<std::size_t>(n));
    std::vector<double> g(static_cast<std::size_t>(n));
    for (long t = begin; t < end; ++t) {
      x = model.sample_block(n, seed, 2 * static_cast<std::uint64_t>(t));
      CounterRng cb(seed, 2 * static_cast<std::uint64_t>(t) + 1);
      bool covered = false;
      for (int j = 0; j < m_count && !covered; ++j) {
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
          g[static_cast<std::size_t>(i)] = cb.next_normal();
          norm2 += g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
        }
        const double scale =
            kind == CodebookKind::Spherical ? std::sqrt(radius2 / norm2) : sqrt_py;
        double dist = 0.0;
        for (int i = 0; i < n; ++i) {
          const double d = x[static_cast<std::size_t>(i)] - scale * g[static_cast<std::size_t>(i)];
          dist += d * d;
        }
        covered = dist <= setup.distortion * n;
      }
      const double w = covered ? 0.0 : 1.0;
      acc.sw += w;
      acc.sw2 += w;
      ++acc.count;
    }
    return acc;
  };

  const MeanAccum acc = run_chunked(trials, 256, 1, chunk_fn);
  EnsembleEstimate est;
  est.method = EstimateMethod::Direct;
  est.n = n;
  est.log_m = std::log(static_cast<double>(m_count));
  est.kind = kind;
  est.seed = seed;
  finalize_mc(est, acc);
  return est;
}

std::vector<MdPoint> md_probe(const SourceModel& model, const DistortionSetup& setup,
                              double t_exponent, std::span<const int> n_grid, std::uint64_t seed,
                              CodebookKind kind) {
  if (!(t_exponent > 0.0 && t_exponent < 0.5))
    throw std::domain_error("md_probe: t_exponent must lie in (0, 0.5) so that xi_n -> 0 and "
                            "sqrt(n / ln n) xi_n -> inf");
  const MomentSummary mom = model.moments();
  md_constant(mom.sigma2, mom.zeta);  // rejects zero dispersion
  const double rd = rd_function(setup.sigma2, setup.distortion);

  std::vector<MdPoint> out;
  out.reserve(n_grid.size());
  for (int n : n_grid) {
    if (n < 2) throw std::domain_error("md_probe: blocklengths must be >= 2");
    MdPoint p;
    p.n = n;
    p.xi = std::pow(static_cast<double>(n), -t_exponent);
    p.log_m = n * (rd + p.xi);
    SimPlan plan;
    plan.n = n;
    plan.log_m = p.log_m;
    plan.kind = kind;
    plan.seed = seed;
    if (model.power_density(n))
      p.pe = pe_quadrature(model, setup, plan).value;
    else
      p.pe = pe_conditional(model, setup, plan).value;
    p.measured = -std::log(p.pe) / (n * p.xi * p.xi);
    out.push_back(p);
  }
  return out;
}

}  // namespace gcrd
