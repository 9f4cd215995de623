#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gcrd/shellprob.hpp"
#include "gcrd/sources.hpp"

namespace gcrd {

enum class EstimateMethod { Conditional, Quadrature, Direct };

// Estimated ensemble excess-distortion probability over source blocks and a
// random codebook of exp(log_m) codewords. std_error is 0 exactly for the
// quadrature method; Monte Carlo methods report a sample standard error
// (floored at 1/samples in the degenerate all-equal case).
struct EnsembleEstimate {
  double value = 0.0;
  double std_error = 0.0;
  EstimateMethod method = EstimateMethod::Conditional;
  int n = 0;
  double log_m = 0.0;
  CodebookKind kind = CodebookKind::Spherical;
  std::uint64_t seed = 0;
};

struct SimPlan {
  int n = 0;
  double log_m = 0.0;
  CodebookKind kind = CodebookKind::Spherical;
  long samples = 100000;
  std::uint64_t seed = 0;
  int worker_streams = 1;    // parallelism only; never changes the result
  bool stratified = false;   // stratify Z on quantiles of the analytic f_Z
};

// Monte Carlo over source powers Z with the exact conditional coverage
// probability: mean of (1 - P(n, Z))^M.
EnsembleEstimate pe_conditional(const SourceModel& model, const DistortionSetup& setup,
                                const SimPlan& plan);

// Deterministic integral of (1 - P(n, z))^M against the analytic power
// density, plus the uncoverable-band masses for the spherical kind.
// Requires the model to have an analytic power density.
EnsembleEstimate pe_quadrature(const SourceModel& model, const DistortionSetup& setup,
                               const SimPlan& plan);

// Brute-force simulation: sample a codebook of m_count codewords and a source
// block per trial, encode to the nearest codeword, count excess distortion.
EnsembleEstimate pe_direct(const SourceModel& model, const DistortionSetup& setup, int n,
                           int m_count, long trials, std::uint64_t seed, CodebookKind kind);

// One moderate-deviations probe point: at blocklength n the codebook size is
// log_m = n (rd + n^{-t}), and measured = -ln P_e / (n * n^{-2t}) should
// drift toward 1/(2 * dispersion).
struct MdPoint {
  int n = 0;
  double xi = 0.0;
  double log_m = 0.0;
  double pe = 0.0;
  double measured = 0.0;
};

std::vector<MdPoint> md_probe(const SourceModel& model, const DistortionSetup& setup,
                              double t_exponent, std::span<const int> n_grid, std::uint64_t seed,
                              CodebookKind kind = CodebookKind::Spherical);

}  // namespace gcrd
