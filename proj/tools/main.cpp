#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcrd/asymptotics.hpp"
#include "gcrd/cli_ops.hpp"
#include "gcrd/ensemble.hpp"
#include "gcrd/errors.hpp"
#include "gcrd/source_config.hpp"
#include "gcrd/validate.hpp"

namespace {

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw gcrd::config_error(out_path + ": cannot open output file");
  out << text;
}

gcrd::DistortionSetup setup_for(const gcrd::SourceModel& model, double distortion) {
  const double sigma2 = model.moments().sigma2;
  if (!(distortion > 0.0 && distortion < sigma2)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", sigma2);
    throw gcrd::config_error("--distortion must lie in (0, sigma2 = " + std::string(buf) + ")");
  }
  return {sigma2, distortion};
}

std::string plot_path_for(const std::string& csv_path) {
  const std::size_t dot = csv_path.find_last_of('.');
  const std::size_t slash = csv_path.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
    return csv_path.substr(0, dot) + ".gp";
  return csv_path + ".gp";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gcrd: ensemble rate-distortion asymptotics for random Gaussian codebooks"};
  app.require_subcommand(1);

  std::string source_path;
  std::string out_path;
  double distortion = 0.0;
  std::uint64_t seed = 0;
  bool bits = false;

  auto* moments = app.add_subcommand("moments", "source moment and dispersion summary");
  moments->add_option("--source", source_path, "source config JSON")->required();
  moments->add_option("--out", out_path, "output CSV path (default stdout)");

  auto* exponents = app.add_subcommand("exponents", "excess-distortion exponent curves");
  exponents->add_option("--source", source_path)->required();
  exponents->add_option("--distortion", distortion, "distortion level D in (0, sigma2)")
      ->required();
  double r_min = 0.1, r_max = 2.0;
  int r_steps = 60;
  bool emit_plot = false;
  exponents->add_option("--r-min", r_min, "first rate (nats/symbol)");
  exponents->add_option("--r-max", r_max, "last rate (nats/symbol)");
  exponents->add_option("--r-steps", r_steps, "number of grid points")
      ->check(CLI::Range(2, 100000));
  exponents->add_flag("--emit-plot", emit_plot, "write a gnuplot script next to the CSV");
  exponents->add_flag("--bits", bits, "print rates and exponents in bits");
  exponents->add_option("--out", out_path);

  auto* second = app.add_subcommand("second-order", "finite-blocklength codebook size targets");
  second->add_option("--source", source_path)->required();
  second->add_option("--distortion", distortion)->required();
  std::vector<int> n_grid;
  double epsilon = 0.0, coeff = 0.0;
  second->add_option("--n", n_grid, "blocklengths")->required()->expected(-1);
  second->add_option("--epsilon", epsilon, "target excess probability")
      ->required()
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  second->add_option("--coeff", coeff, "ln(n) coefficient of the unresolved third-order term");
  second->add_flag("--bits", bits);
  second->add_option("--out", out_path);

  auto* simulate = app.add_subcommand("simulate", "ensemble excess-distortion probability");
  simulate->add_option("--source", source_path)->required();
  simulate->add_option("--distortion", distortion)->required();
  std::string method = "conditional", kind_name = "spherical";
  int sim_n = 0, m_count = 256;
  double log_m = -1.0, rate = -1.0;
  long samples = 100000, trials = 10000;
  int workers = 1;
  bool stratified = false;
  simulate->add_option("--method", method)
      ->check(CLI::IsMember({"conditional", "quadrature", "direct"}));
  simulate->add_option("--n", sim_n, "blocklength")->required()->check(CLI::PositiveNumber);
  auto* opt_logm = simulate->add_option("--log-m", log_m, "ln of the codebook size (nats)");
  auto* opt_rate = simulate->add_option("--rate", rate, "rate in nats/symbol (log_m = n * rate)");
  opt_logm->excludes(opt_rate);
  simulate->add_option("--kind", kind_name)->check(CLI::IsMember({"spherical", "iid"}));
  simulate->add_option("--samples", samples, "Monte Carlo Z-samples")->check(CLI::PositiveNumber);
  simulate->add_option("--m-count", m_count, "codebook size for --method direct");
  simulate->add_option("--trials", trials, "codebook draws for --method direct")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--workers", workers, "worker streams")->check(CLI::PositiveNumber);
  simulate->add_flag("--stratified", stratified, "stratify Z-samples on f_Z quantiles");
  simulate->add_option("--seed", seed);
  simulate->add_flag("--bits", bits);
  simulate->add_option("--out", out_path);

  auto* validate = app.add_subcommand("validate", "run the invariant suites");
  bool quick = false, corrupt_gupper = false;
  validate->add_flag("--quick", quick, "reduced grids (< 60 s)");
  validate->add_flag("--corrupt-gupper", corrupt_gupper,
                     "test hook: scale the shell upper bound by 0.5");
  validate->add_option("--seed", seed);
  validate->add_option("--workers", workers)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // help/version exit 0; every usage error lands in the config class
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (moments->parsed()) {
      const gcrd::SourceModel model = gcrd::load_source_config(source_path);
      write_output(out_path, gcrd::csv_moments(model));
    } else if (exponents->parsed()) {
      if (emit_plot && out_path.empty())
        throw gcrd::config_error("--emit-plot needs --out so the script can reference the CSV");
      const gcrd::SourceModel model = gcrd::load_source_config(source_path);
      const gcrd::DistortionSetup setup = setup_for(model, distortion);
      std::vector<double> grid;
      for (int i = 0; i < r_steps; ++i)
        grid.push_back(r_min + (r_max - r_min) * i / (r_steps - 1));
      write_output(out_path, gcrd::csv_exponents(model, setup, grid, bits));
      if (emit_plot) {
        const std::string gp = plot_path_for(out_path);
        write_output(gp, gcrd::gnuplot_exponents_script(out_path, bits));
      }
    } else if (second->parsed()) {
      const gcrd::SourceModel model = gcrd::load_source_config(source_path);
      const gcrd::DistortionSetup setup = setup_for(model, distortion);
      write_output(out_path, gcrd::csv_second_order(model, setup, n_grid, epsilon, coeff, bits));
    } else if (simulate->parsed()) {
      const gcrd::SourceModel model = gcrd::load_source_config(source_path);
      const gcrd::DistortionSetup setup = setup_for(model, distortion);
      const gcrd::CodebookKind kind = kind_name == "spherical" ? gcrd::CodebookKind::Spherical
                                                               : gcrd::CodebookKind::IidGaussian;
      gcrd::EnsembleEstimate est;
      if (method == "direct") {
        est = gcrd::pe_direct(model, setup, sim_n, m_count, trials, seed, kind);
      } else {
        if ((opt_logm->count() == 0) == (opt_rate->count() == 0))
          throw gcrd::config_error("provide exactly one of --log-m or --rate");
        gcrd::SimPlan plan;
        plan.n = sim_n;
        plan.log_m = opt_logm->count() ? log_m : sim_n * rate;
        plan.kind = kind;
        plan.samples = samples;
        plan.seed = seed;
        plan.worker_streams = workers;
        plan.stratified = stratified;
        est = method == "quadrature" ? gcrd::pe_quadrature(model, setup, plan)
                                     : gcrd::pe_conditional(model, setup, plan);
      }
      write_output(out_path, gcrd::csv_simulate(est, bits));
    } else if (validate->parsed()) {
      gcrd::ValidateOptions opts;
      opts.quick = quick;
      opts.gupper_scale = corrupt_gupper ? 0.5 : 1.0;
      opts.seed = seed == 0 ? 1 : seed;
      opts.workers = workers;
      const std::vector<gcrd::InvariantResult> results = gcrd::run_validation(opts);
      std::cout << gcrd::render_validation_report(results);
      return gcrd::validation_passed(results) ? 0 : 1;
    }
  } catch (const gcrd::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gcrd::capability_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gcrd::resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
