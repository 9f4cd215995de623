#pragma once

// Brute-force geometric simulators used as oracles for the closed-form shell
// probabilities: draw actual codewords, measure actual distances. Slow and
// dumb on purpose.

#include <cmath>
#include <vector>

#include "gcrd/rng.hpp"
#include "gcrd/shellprob.hpp"

namespace gcrd::testing {

struct McTally {
  double p_hat = 0.0;
  long hits = 0;
  long draws = 0;
};

// Pr{ |x - Y|^2 <= n D } for one random codeword Y and a fixed block x of
// power z (taken as (sqrt(nz), 0, ..., 0); both ensembles are rotation
// invariant).
inline McTally shell_mc(const DistortionSetup& setup, int n, double z, CodebookKind kind,
                        long draws, std::uint64_t seed) {
  CounterRng rng(seed, 0);
  const double x1 = std::sqrt(n * z);
  const double radius2 = n * setup.p_y;
  const double sqrt_py = std::sqrt(setup.p_y);
  std::vector<double> g(static_cast<std::size_t>(n));
  long hits = 0;
  for (long t = 0; t < draws; ++t) {
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      g[static_cast<std::size_t>(i)] = rng.next_normal();
      norm2 += g[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(i)];
    }
    const double scale = kind == CodebookKind::Spherical ? std::sqrt(radius2 / norm2) : sqrt_py;
    double dist = (x1 - scale * g[0]) * (x1 - scale * g[0]);
    for (int i = 1; i < n; ++i) dist += scale * g[static_cast<std::size_t>(i)] * scale * g[static_cast<std::size_t>(i)];
    if (dist <= n * setup.distortion) ++hits;
  }
  return {static_cast<double>(hits) / static_cast<double>(draws), hits, draws};
}

// Standard error of a binomial proportion under the *claimed* probability;
// the right yardstick when the empirical count may be zero.
inline double binom_se(double p, long draws) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(draws));
}

}  // namespace gcrd::testing
