#include "gcrd/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gcrd/asymptotics.hpp"
#include "gcrd/ensemble.hpp"
#include "gcrd/shellprob.hpp"
#include "gcrd/sources.hpp"

namespace gcrd {

namespace {

const double INF = std::numeric_limits<double>::infinity();

struct Slack {
  double worst = INF;
  void fold(double s) { worst = std::min(worst, s); }
};

std::vector<double> linspace(double a, double b, int k) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out.push_back(a + (b - a) * i / (k - 1));
  return out;
}

double rayleigh_conjugate(double t, double mean_x2) {
  const double r = t / mean_x2;
  return r - 1.0 - std::log(r);
}

InvariantResult closed_form_boundaries() {
  Slack s;
  const double pairs[][2] = {{1.0, 0.25}, {1.0, 0.6}, {2.5, 1.9}, {4.0, 1.0}};
  for (const auto& p : pairs) {
    const DistortionSetup setup(p[0], p[1]);
    const double rd = rd_function(p[0], p[1]);
    s.fold(1e-11 - std::fabs(h_func(setup, setup.r1 * setup.r1) - 1.0));
    s.fold(1e-11 - std::fabs(h_func(setup, setup.r2 * setup.r2) - 1.0));
    s.fold(1e-11 - std::fabs(r_sp(setup, p[0]) - rd));
    s.fold(1e-11 - std::fabs(r_iid_star(setup, p[0]) - rd));
    s.fold(1e-11 - std::fabs(s_star(setup, p[0]) - setup.p_y / (2.0 * p[1])));
  }
  return {"closed-form-boundaries", "(sigma2,D) in {(1,0.25),(1,0.6),(2.5,1.9),(4,1)}", s.worst,
          s.worst >= 0.0};
}

InvariantResult legendre_closed_form(bool quick) {
  Slack s;
  const int k = quick ? 7 : 17;
  const SourceModel gauss = SourceModel::gaussian(1.0);
  for (double t : linspace(1.0, 5.0, k))
    s.fold(1e-8 - std::fabs(gauss.legendre_x2(t).value - 0.5 * rayleigh_conjugate(t, 1.0)));
  const SourceModel ray = SourceModel::rayleigh(std::sqrt(0.5));
  for (double t : linspace(1.0, 5.0, k))
    s.fold(1e-8 - std::fabs(ray.legendre_x2(t).value - rayleigh_conjugate(t, 1.0)));
  return {"legendre-closed-form", "gaussian+rayleigh, t in [sigma2, 5 sigma2]", s.worst,
          s.worst >= 0.0};
}

InvariantResult spherical_zero_region() {
  Slack s;
  const DistortionSetup setup(1.0, 0.25);
  const double lo = setup.r1 * setup.r1;
  const double hi = setup.r2 * setup.r2;
  for (int n : {2, 16, 301}) {
    for (double z : {lo * 0.5, lo * 0.99, hi * 1.01, hi * 2.0, 25.0})
      s.fold(0.0 - psi_spherical(setup, n, z).value.value());
  }
  return {"spherical-zero-region", "n in {2,16,301}, z outside [r1^2, r2^2]", s.worst,
          s.worst >= 0.0};
}

InvariantResult sandwich(const ValidateOptions& opts) {
  Slack s;
  const double lscale = std::log(opts.gupper_scale);
  const std::vector<int> ns = opts.quick ? std::vector<int>{4, 8, 64}
                                         : std::vector<int>{4, 6, 8, 16, 64, 256};
  for (const auto& pd : {std::pair{1.0, 0.25}, std::pair{1.0, 0.6}}) {
    const DistortionSetup setup(pd.first, pd.second);
    const double band = std::fabs(setup.sigma2 - 2.0 * setup.distortion);
    const double hi = setup.r2 * setup.r2;
    std::vector<double> zs = linspace(band, band + 0.97 * (hi - band), 9);
    for (int n : ns) {
      for (double z : zs) {
        const double psi = psi_spherical(setup, n, z).log_value;
        const double lo = g_lower(setup, n, z).log_value;
        const double up = g_upper(setup, n, z).log_value + lscale;
        s.fold(up - psi);
        s.fold(psi - lo);
      }
    }
  }
  return {"sandwich", "(1,0.25)+(1,0.6), n up to 256, z in [|sigma2-2D|, ~r2^2]", s.worst,
          s.worst >= 0.0};
}

InvariantResult shell_monotone(bool quick) {
  Slack s;
  const DistortionSetup setup(1.0, 0.25);
  const int k = quick ? 15 : 41;
  for (int n : {8, 64}) {
    double prev = INF;
    for (double z : linspace(0.0, 3.0, k)) {
      const double v = upsilon_iid(setup, n, z).value.value();
      s.fold(prev - v + 1e-14);
      s.fold(v);
      s.fold(1.0 - v);
      prev = v;
    }
  }
  return {"shell-monotone", "upsilon, n in {8,64}, z in [0,3]", s.worst, s.worst >= 0.0};
}

InvariantResult rsp_riid_ordering(bool quick) {
  Slack s;
  for (const auto& pd : {std::pair{1.0, 0.25}, std::pair{1.0, 0.6}}) {
    const DistortionSetup setup(pd.first, pd.second);
    const double hi = setup.r2 * setup.r2;
    const int k = quick ? 9 : 25;
    for (double z : linspace(setup.sigma2 + 1e-6, setup.sigma2 + 0.98 * (hi - setup.sigma2), k))
      s.fold(r_sp(setup, z) - r_iid_star(setup, z));
  }
  return {"rsp-riid-ordering", "(1,0.25)+(1,0.6), z in (sigma2, r2^2)", s.worst, s.worst >= 0.0};
}

InvariantResult riid_sup(bool quick) {
  Slack s;
  const DistortionSetup setup(1.0, 0.25);
  const int k = quick ? 9 : 33;
  for (double z : {1.1, 1.2, 1.5}) {
    const double star = s_star(setup, z);
    const double best = r_iid_star(setup, z);
    for (double sv : linspace(0.0, 4.0 * star, k)) s.fold(best - r_iid(setup, sv, z) + 1e-12);
  }
  return {"riid-sup", "z in {1.1,1.2,1.5}, s in [0, 4 s*]", s.worst, s.worst >= 0.0};
}

InvariantResult companion_root(bool quick) {
  Slack s;
  const DistortionSetup setup(1.0, 0.25);
  const double hi = setup.r2 * setup.r2;
  const int k = quick ? 10 : 50;
  for (double a : linspace(setup.sigma2, setup.sigma2 + 0.999 * (hi - setup.sigma2), k)) {
    const double b = companion_beta(setup, a);
    s.fold(1e-12 - std::fabs(h_func(setup, b) - h_func(setup, a)));
    s.fold(2.0 * setup.sigma2 - (a + b) + 1e-12);
  }
  return {"companion-root", "alpha in [sigma2, r2^2), 50 points", s.worst, s.worst >= 0.0};
}

InvariantResult exponent_ordering(bool quick) {
  Slack s;
  const SourceModel ternary = SourceModel::discrete(
      {std::sqrt(0.3), 2.0 * std::sqrt(0.3), 3.0 * std::sqrt(0.3)},
      {0.5, 1.0 / 3.0, 1.0 / 6.0});
  const SourceModel gauss = SourceModel::gaussian(1.0);
  const SourceModel ray = SourceModel::rayleigh(std::sqrt(0.5));
  const DistortionSetup setup(1.0, 0.25);
  const double rd = rd_function(1.0, 0.25);
  const int k = quick ? 6 : 15;
  for (const SourceModel* m : {&ternary, &gauss, &ray}) {
    for (double r : linspace(rd + 0.02, rd + 1.2, k)) {
      const ExponentPoint sp = exponent(*m, setup, r, CodebookKind::Spherical);
      const ExponentPoint iid = exponent(*m, setup, r, CodebookKind::IidGaussian);
      if (std::isinf(iid.exponent) && !std::isinf(sp.exponent)) continue;  // ordered by sentinel
      s.fold(iid.exponent - sp.exponent);
    }
    for (CodebookKind kind : {CodebookKind::Spherical, CodebookKind::IidGaussian})
      s.fold(exponent(*m, setup, rd * 0.5, kind).exponent == 0.0 ? INF : -1.0);
  }
  return {"exponent-ordering", "ternary+gaussian+rayleigh, R in (rd, rd+1.2]", s.worst,
          s.worst >= 0.0};
}

InvariantResult method_agreement(const ValidateOptions& opts) {
  Slack s;
  const SourceModel gauss = SourceModel::gaussian(1.0);
  const DistortionSetup setup(1.0, 0.25);
  SimPlan plan;
  plan.n = 200;
  plan.samples = opts.quick ? 20000 : 100000;
  plan.seed = opts.seed;
  plan.worker_streams = opts.workers;
  for (CodebookKind kind : {CodebookKind::Spherical, CodebookKind::IidGaussian}) {
    plan.kind = kind;
    for (double rate : {0.75, 0.80}) {
      plan.log_m = plan.n * rate;
      const EnsembleEstimate mc = pe_conditional(gauss, setup, plan);
      const EnsembleEstimate q = pe_quadrature(gauss, setup, plan);
      s.fold(4.0 * mc.std_error - std::fabs(mc.value - q.value));
    }
  }
  const long trials = opts.quick ? 4000 : 20000;
  for (CodebookKind kind : {CodebookKind::Spherical, CodebookKind::IidGaussian}) {
    const EnsembleEstimate dir = pe_direct(gauss, setup, 16, 256, trials, opts.seed, kind);
    SimPlan p2;
    p2.n = 16;
    p2.log_m = std::log(256.0);
    p2.kind = kind;
    p2.samples = opts.quick ? 20000 : 100000;
    p2.seed = opts.seed + 1;
    p2.worker_streams = opts.workers;
    const EnsembleEstimate mc = pe_conditional(gauss, setup, p2);
    const double comb = std::sqrt(dir.std_error * dir.std_error + mc.std_error * mc.std_error);
    s.fold(4.0 * comb - std::fabs(dir.value - mc.value));
  }
  return {"method-agreement", "gaussian: quad vs MC (n=200), direct vs MC (n=16, M=256)", s.worst,
          s.worst >= 0.0};
}

InvariantResult pe_monotone_m(const ValidateOptions& opts) {
  Slack s;
  const SourceModel gauss = SourceModel::gaussian(1.0);
  const DistortionSetup setup(1.0, 0.25);
  for (CodebookKind kind : {CodebookKind::Spherical, CodebookKind::IidGaussian}) {
    double prev = INF;
    for (double rate : {0.60, 0.70, 0.80}) {
      SimPlan plan;
      plan.n = 100;
      plan.log_m = 100.0 * rate;
      plan.kind = kind;
      plan.seed = opts.seed;
      const double v = pe_quadrature(gauss, setup, plan).value;
      s.fold(prev - v + 1e-12);
      prev = v;
    }
  }
  return {"pe-monotone-m", "quadrature, n=100, log_m/n in {0.6,0.7,0.8}, both kinds", s.worst,
          s.worst >= 0.0};
}

InvariantResult spherical_floor(const ValidateOptions& opts) {
  Slack s;
  const SourceModel gauss = SourceModel::gaussian(1.0);
  const DistortionSetup setup(1.0, 0.25);
  const int n = 100;
  const PowerDensity fz = *gauss.power_density(n);
  const double floor = fz.cdf(setup.r1 * setup.r1) + fz.upper(setup.r2 * setup.r2);
  SimPlan plan;
  plan.n = n;
  plan.kind = CodebookKind::Spherical;
  plan.seed = opts.seed;
  for (double rate : {1.0, 2.0, 10.0}) {
    plan.log_m = n * rate;
    s.fold(pe_quadrature(gauss, setup, plan).value - floor + 1e-12);
  }
  plan.log_m = n * 10.0;
  s.fold(1e-6 - std::fabs(pe_quadrature(gauss, setup, plan).value - floor));
  plan.kind = CodebookKind::IidGaussian;
  const double iid = pe_quadrature(gauss, setup, plan).value;
  s.fold(1e-6 - iid);
  return {"spherical-floor", "gaussian n=100, log_m/n in {1,2,10}", s.worst, s.worst >= 0.0};
}

InvariantResult scale_invariance(bool quick) {
  Slack s;
  const double c = 2.5;
  const DistortionSetup a(1.0, 0.25);
  const DistortionSetup b(c * 1.0, c * 0.25);
  const SourceModel ga = SourceModel::gaussian(1.0);
  const SourceModel gb = SourceModel::gaussian(c);
  const double rd = rd_function(1.0, 0.25);
  const int k = quick ? 5 : 11;
  for (double r : linspace(rd + 0.05, rd + 0.8, k)) {
    for (CodebookKind kind : {CodebookKind::Spherical, CodebookKind::IidGaussian}) {
      const double ea = exponent(ga, a, r, kind).exponent;
      const double eb = exponent(gb, b, r, kind).exponent;
      s.fold(1e-9 - std::fabs(ea - eb));
    }
  }
  for (int n : {8, 64}) {
    for (double z : linspace(0.2, 1.8, quick ? 5 : 9)) {
      const double pa = psi_spherical(a, n, z).value.value();
      const double pb = psi_spherical(b, n, c * z).value.value();
      s.fold(1e-12 - std::fabs(pa - pb));
    }
  }
  return {"scale-invariance", "(sigma2,D) vs 2.5x scaled: exponents and psi", s.worst,
          s.worst >= 0.0};
}

InvariantResult chernoff_bound(const ValidateOptions& opts) {
  Slack s;
  const SourceModel ray = SourceModel::rayleigh(std::sqrt(0.5));
  const int n = 200;
  const long samples = opts.quick ? 100000 : 1000000;
  for (double t : {1.2, 1.5}) {
    const double bound = std::exp(-n * ray.legendre_x2(t).value);
    long over = 0;
    for (long i = 0; i < samples; ++i)
      if (ray.sample_power(n, opts.seed, static_cast<std::uint64_t>(i)) > t) ++over;
    const double emp = static_cast<double>(over) / static_cast<double>(samples);
    s.fold(bound - emp);
  }
  return {"chernoff-bound", "rayleigh n=200, t in {1.2,1.5} sigma2", s.worst, s.worst >= 0.0};
}

}  // namespace

std::vector<InvariantResult> run_validation(const ValidateOptions& opts) {
  std::vector<InvariantResult> out;
  out.push_back(closed_form_boundaries());
  out.push_back(legendre_closed_form(opts.quick));
  out.push_back(spherical_zero_region());
  out.push_back(sandwich(opts));
  out.push_back(shell_monotone(opts.quick));
  out.push_back(rsp_riid_ordering(opts.quick));
  out.push_back(riid_sup(opts.quick));
  out.push_back(companion_root(opts.quick));
  out.push_back(exponent_ordering(opts.quick));
  out.push_back(method_agreement(opts));
  out.push_back(pe_monotone_m(opts));
  out.push_back(spherical_floor(opts));
  out.push_back(scale_invariance(opts.quick));
  out.push_back(chernoff_bound(opts));
  return out;
}

bool validation_passed(const std::vector<InvariantResult>& results) {
  for (const InvariantResult& r : results)
    if (!r.pass) return false;
  return true;
}

std::string render_validation_report(const std::vector<InvariantResult>& results) {
  std::ostringstream out;
  for (const InvariantResult& r : results) {
    out << (r.pass ? "[ ok ] " : "[FAIL] ") << r.name << "  worst slack " << r.worst_slack
        << "  (" << r.grid << ")\n";
  }
  out << (validation_passed(results) ? "all invariants satisfied\n" : "invariant violations found\n");
  return out.str();
}

}  // namespace gcrd
