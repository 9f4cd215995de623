// Shell coverage probabilities: frozen high-precision references, the
// closed-form bound sandwich, and brute-force geometric Monte Carlo.

#include <cmath>
#include <limits>
#include <stdexcept>

#include <doctest.h>

#include "gcrd/shellprob.hpp"
#include "gcrd/specfun.hpp"
#include "mc_oracles.hpp"

using namespace gcrd;

namespace {
const double INF = std::numeric_limits<double>::infinity();
}

TEST_CASE("distortion setup geometry") {
  const struct {
    double s2, d;
  } cases[] = {{1.0, 0.25}, {2.7, 0.9}, {1.0, 0.6}, {5.0, 4.9}};
  for (const auto& c : cases) {
    const DistortionSetup s(c.s2, c.d);
    CHECK(s.p_y == c.s2 - c.d);
    CHECK(s.r1 * s.r1 + s.r2 * s.r2 == doctest::Approx(2.0 * c.s2).epsilon(1e-12));
    // factored form has exact zeros at the band edges
    CHECK(one_minus_h(s, s.r2 * s.r2) == 0.0);
    if (s.r1 > 0.0) {
      CHECK(one_minus_h(s, s.r1 * s.r1) == 0.0);
      CHECK(power_ratio_h(s, s.r1 * s.r1) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(power_ratio_h(s, s.r2 * s.r2) == doctest::Approx(1.0).epsilon(1e-12));
    // the two forms of h agree across the band
    for (int k = 1; k < 10; ++k) {
      const double z = 0.2 * c.s2 * k;
      CHECK(power_ratio_h(s, z) + one_minus_h(s, z) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("distortion setup rejects degenerate pairs") {
  CHECK_THROWS_AS(DistortionSetup(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(DistortionSetup(1.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(DistortionSetup(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(DistortionSetup(1.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(DistortionSetup(0.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(DistortionSetup(-1.0, 0.1), std::domain_error);
}

TEST_CASE("spherical shell probability matches references") {
  const DistortionSetup s(1.0, 0.25);
  CHECK(psi_spherical(s, 32, 0.8).value.value() ==
        doctest::Approx(5.2935425224102374e-10).epsilon(1e-11));
  CHECK(psi_spherical(s, 32, 1.0).value.value() ==
        doctest::Approx(3.7842432839520011e-11).epsilon(1e-11));
  CHECK(psi_spherical(s, 32, 1.3).value.value() ==
        doctest::Approx(8.5265540210787589e-14).epsilon(1e-11));
  CHECK(std::fabs(psi_spherical(s, 2000, 1.2).log_value - (-1627.2219911613132)) < 1e-8);
}

TEST_CASE("spherical shell probability closed form at n = 2") {
  // (1 + U)/2 is Beta(1/2, 1/2): the tail is an arcsine law
  const DistortionSetup s(1.0, 0.25);
  for (double z : {0.8, 1.0, 1.3}) {
    const double u0 = (z + s.p_y - s.distortion) / (2.0 * std::sqrt(z * s.p_y));
    const double ref = (2.0 / M_PI) * std::asin(std::sqrt(0.5 * (1.0 - u0)));
    CHECK(psi_spherical(s, 2, z).value.value() == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("spherical shell probability edge regions") {
  const DistortionSetup s(1.0, 0.25);
  // exact zero strictly outside [r1^2, r2^2]
  CHECK(psi_spherical(s, 16, 0.9 * s.r1 * s.r1).value.value() == 0.0);
  CHECK(psi_spherical(s, 16, 0.9 * s.r1 * s.r1).log_value == -INF);
  CHECK(psi_spherical(s, 16, 2.0).value.value() == 0.0);
  // at the band edge itself the tail has collapsed
  CHECK(psi_spherical(s, 32, s.r1 * s.r1).value.value() < 1e-180);

  // sigma2 < 2D: at z = 2D - sigma2 the cap threshold sits at the equator
  const DistortionSetup wide(1.0, 0.75);
  for (int n : {2, 5, 32})
    CHECK(psi_spherical(wide, n, 0.5).value.value() == doctest::Approx(0.5).epsilon(1e-13));

  // deep distortion: every codeword on the shell covers the block
  const DistortionSetup deep(1.0, 0.9);
  CHECK(psi_spherical(deep, 12, 0.1).value.value() == 1.0);
  CHECK(psi_spherical(deep, 12, 0.1).log_value == 0.0);
}

TEST_CASE("spherical shell probability decreases in blocklength") {
  const DistortionSetup s(1.0, 0.25);
  const double p8 = psi_spherical(s, 8, 1.0).value.value();
  const double p16 = psi_spherical(s, 16, 1.0).value.value();
  const double p32 = psi_spherical(s, 32, 1.0).value.value();
  CHECK(p8 > p16);
  CHECK(p16 > p32);
}

TEST_CASE("closed-form bounds match references and bracket the shell probability") {
  const DistortionSetup s(1.0, 0.25);
  const double ll = g_lower(s, 100, 1.0).log_value;
  const double lu = g_upper(s, 100, 1.0).log_value;
  CHECK(std::fabs(ll - (-71.840594543294972)) < 1e-10);
  CHECK(std::fabs(lu - (-65.859180332040492)) < 1e-10);
  // the bound ratio collapses to (n - 1)/(1 - h(z))
  CHECK(std::exp(lu - ll) == doctest::Approx(396.0).epsilon(1e-12));
  CHECK(g_lower(s, 100, 1.0).method == ShellMethod::LowerBound);
  CHECK(g_upper(s, 100, 1.0).method == ShellMethod::UpperBound);

  for (const auto& setup : {DistortionSetup(1.0, 0.25), DistortionSetup(1.0, 0.6)}) {
    const double band = std::fabs(setup.sigma2 - 2.0 * setup.distortion);
    const double hi = setup.r2 * setup.r2;
    for (int n : {4, 8, 64}) {
      for (int k = 0; k < 9; ++k) {
        const double z = band + (0.97 * hi - band) * k / 8.0;
        const double lp = psi_spherical(setup, n, z).log_value;
        CHECK(g_lower(setup, n, z).log_value <= lp);
        CHECK(lp <= g_upper(setup, n, z).log_value);
      }
    }
  }
}

TEST_CASE("closed-form bounds reject out-of-domain arguments") {
  const DistortionSetup s(1.0, 0.25);  // r1^2 ~ 0.134, band 0.5, r2^2 ~ 1.866
  CHECK_THROWS_AS(g_lower(s, 3, 1.0), std::domain_error);
  CHECK_THROWS_AS(g_lower(s, 16, 0.05), std::domain_error);
  CHECK_THROWS_AS(g_lower(s, 16, 3.0), std::domain_error);
  CHECK_THROWS_AS(g_upper(s, 3, 1.0), std::domain_error);
  CHECK_THROWS_AS(g_upper(s, 16, 0.4), std::domain_error);
  CHECK_THROWS_AS(g_upper(s, 16, 3.0), std::domain_error);
  CHECK_THROWS_AS(psi_spherical(s, 1, 1.0), std::domain_error);
  CHECK_THROWS_AS(psi_spherical(s, 16, 0.0), std::domain_error);
  CHECK_THROWS_AS(psi_spherical(s, 16, -1.0), std::domain_error);
}

TEST_CASE("iid shell probability matches references") {
  const DistortionSetup s(1.0, 0.25);
  const ShellProbability u = upsilon_iid(s, 32, 1.0);
  CHECK(u.value.value() == doctest::Approx(2.3707017971687391e-11).epsilon(1e-10));
  CHECK(std::fabs(u.log_value - (-24.465249994672598)) < 1e-10);
  CHECK(u.kind == CodebookKind::IidGaussian);
  CHECK(std::fabs(upsilon_iid(s, 400, 1.2).log_value - (-321.09263570083142)) < 1e-8);
}

TEST_CASE("iid shell probability at zero power is a central chi-square tail") {
  const DistortionSetup s(1.0, 0.25);
  for (int n : {5, 32}) {
    const double central =
        specfun::log_reg_inc_gamma_lower(0.5 * n, 0.5 * n * s.distortion / s.p_y);
    CHECK(upsilon_iid(s, n, 0.0).log_value == central);
  }
  CHECK_THROWS_AS(upsilon_iid(s, 0, 1.0), std::domain_error);
  CHECK_THROWS_AS(upsilon_iid(s, 16, -0.1), std::domain_error);
}

TEST_CASE("exact-prefactor tail approximation of the iid probability") {
  const DistortionSetup s(1.0, 0.25);
  CHECK(std::fabs(upsilon_bahadur_rao(s, 400, 1.2).log_value - (-321.09182051108534)) < 1e-10);
  CHECK(upsilon_bahadur_rao(s, 400, 1.2).method == ShellMethod::BahadurRao);
  // needs a strictly positive tilt
  const DistortionSetup wide(1.0, 0.6);
  CHECK_THROWS_AS(upsilon_bahadur_rao(wide, 100, 0.15), std::domain_error);
  CHECK_NOTHROW(upsilon_bahadur_rao(wide, 100, 0.25));
}

TEST_CASE("shell probabilities agree with geometric Monte Carlo") {
  const DistortionSetup s(1.0, 0.25);
  const long draws = 200000;
  for (double z : {0.8, 1.0}) {
    const double p_sph = psi_spherical(s, 8, z).value.value();
    const auto mc_sph = testing::shell_mc(s, 8, z, CodebookKind::Spherical, draws, 77);
    CHECK(std::fabs(mc_sph.p_hat - p_sph) <= 3.0 * testing::binom_se(p_sph, draws));

    const double p_iid = upsilon_iid(s, 8, z).value.value();
    const auto mc_iid = testing::shell_mc(s, 8, z, CodebookKind::IidGaussian, draws, 78);
    CHECK(std::fabs(mc_iid.p_hat - p_iid) <= 3.0 * testing::binom_se(p_iid, draws));
  }
}
