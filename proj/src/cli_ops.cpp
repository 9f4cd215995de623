#include "gcrd/cli_ops.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace gcrd {

namespace {

const double LN2 = 0.6931471805599453;

double to_bits(double nats) { return nats / LN2; }

}  // namespace

std::string fmt_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_moments(const SourceModel& model) {
  const MomentSummary m = model.moments();
  const double md = m.dispersion > 0.0 ? 1.0 / (2.0 * m.dispersion)
                                       : std::numeric_limits<double>::infinity();
  std::ostringstream out;
  out << "sigma2,zeta,var_x2,dispersion,md_constant\n"
      << fmt_g17(m.sigma2) << ',' << fmt_g17(m.zeta) << ',' << fmt_g17(m.var_x2) << ','
      << fmt_g17(m.dispersion) << ',' << fmt_g17(md) << '\n';
  return out.str();
}

std::string csv_exponents(const SourceModel& model, const DistortionSetup& setup,
                          const std::vector<double>& r_grid, bool bits) {
  const double conv = bits ? 1.0 / LN2 : 1.0;
  std::ostringstream out;
  out << "R,alpha_sp,E_sp,alpha_iid,E_iid\n";
  for (double r : r_grid) {
    const ExponentPoint sp = exponent(model, setup, r, CodebookKind::Spherical);
    const ExponentPoint iid = exponent(model, setup, r, CodebookKind::IidGaussian);
    out << fmt_g17(r * conv) << ',' << fmt_g17(sp.alpha) << ',' << fmt_g17(sp.exponent * conv)
        << ',' << fmt_g17(iid.alpha) << ',' << fmt_g17(iid.exponent * conv) << '\n';
  }
  return out.str();
}

std::string gnuplot_exponents_script(const std::string& csv_path, bool bits) {
  const char* unit = bits ? "bits" : "nats";
  std::ostringstream out;
  out << "set datafile separator ','\n"
      << "set key left top\n"
      << "set xlabel 'R (" << unit << "/symbol)'\n"
      << "set ylabel 'excess-distortion exponent'\n"
      << "set grid\n"
      << "plot '" << csv_path << "' every ::1 using 1:3 with lines lw 2 title 'spherical', \\\n"
      << "     '" << csv_path << "' every ::1 using 1:5 with lines lw 2 title 'i.i.d. Gaussian'\n";
  return out.str();
}

std::string csv_second_order(const SourceModel& model, const DistortionSetup& setup,
                             const std::vector<int>& n_grid, double epsilon, double coeff,
                             bool bits) {
  const MomentSummary m = model.moments();
  const double conv = bits ? 1.0 / LN2 : 1.0;
  std::ostringstream out;
  out << (bits ? "n,log_m,rate_bits_per_symbol\n" : "n,log_m,rate_nats_per_symbol\n");
  for (int n : n_grid) {
    const SecondOrderPoint p = second_order_logM(n, epsilon, m.sigma2, m.zeta, setup.distortion, coeff);
    out << n << ',' << fmt_g17(p.log_m * conv) << ',' << fmt_g17(p.log_m * conv / n) << '\n';
  }
  return out.str();
}

std::string csv_simulate(const EnsembleEstimate& est, bool bits) {
  const double conv = bits ? 1.0 / LN2 : 1.0;
  std::ostringstream out;
  out << "value,std_error,method,n,log_m,kind,seed\n"
      << fmt_g17(est.value) << ',' << fmt_g17(est.std_error) << ',' << method_name(est.method)
      << ',' << est.n << ',' << fmt_g17(est.log_m * conv) << ',' << kind_name(est.kind) << ','
      << est.seed << '\n';
  return out.str();
}

std::string kind_name(CodebookKind kind) {
  return kind == CodebookKind::Spherical ? "spherical" : "iid";
}

std::string method_name(EstimateMethod method) {
  switch (method) {
    case EstimateMethod::Conditional: return "conditional";
    case EstimateMethod::Quadrature: return "quadrature";
    default: return "direct";
  }
}

}  // namespace gcrd
