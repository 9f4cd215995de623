#pragma once

#include <string>
#include <vector>

#include "gcrd/asymptotics.hpp"
#include "gcrd/ensemble.hpp"
#include "gcrd/sources.hpp"

namespace gcrd {

// Shortest-round-trip decimal formatting; writes lowercase "inf"/"-inf"/"nan"
// sentinels instead of large floats so tables stay machine-diffable.
std::string fmt_g17(double v);

// One row: sigma2,zeta,var_x2,dispersion,md_constant. A zero-dispersion
// source gets an "inf" moderate-deviations constant.
std::string csv_moments(const SourceModel& model);

// One row per rate: R,alpha_sp,E_sp,alpha_iid,E_iid. Rates below the
// rate-distortion function carry "nan" alphas and zero exponents; discrete
// sources can produce "inf" exponents. `bits` converts rate and exponent
// columns from nats to bits on output.
std::string csv_exponents(const SourceModel& model, const DistortionSetup& setup,
                          const std::vector<double>& r_grid, bool bits);

// Companion gnuplot script plotting both exponent curves from the CSV.
std::string gnuplot_exponents_script(const std::string& csv_path, bool bits);

// One row per blocklength: n,log_m,rate_nats_per_symbol (header says bits
// when `bits` is set; conversion happens on output only).
std::string csv_second_order(const SourceModel& model, const DistortionSetup& setup,
                             const std::vector<int>& n_grid, double epsilon, double coeff,
                             bool bits);

// One row: value,std_error,method,n,log_m,kind,seed.
std::string csv_simulate(const EnsembleEstimate& est, bool bits);

std::string kind_name(CodebookKind kind);
std::string method_name(EstimateMethod method);

}  // namespace gcrd
