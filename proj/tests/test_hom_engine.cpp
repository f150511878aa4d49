#include <doctest.h>

#include <vhom/errors.hpp>
#include <vhom/hom_engine.hpp>

#include <cmath>
#include <random>

using namespace vhom;

namespace {

const BesselGaussEnvelope kEnv = BesselGaussEnvelope::reference();

struct Case {
  StateFamily family;
  Sign sign;
};

const Case kCases[] = {
    {StateFamily::ProductOpposite, Sign::Plus},   {StateFamily::ProductSame, Sign::Plus},
    {StateFamily::EntangledOpposite, Sign::Plus}, {StateFamily::EntangledOpposite, Sign::Minus},
    {StateFamily::EntangledSame, Sign::Plus},     {StateFamily::EntangledSame, Sign::Minus},
};

bool null_state(const Case &c, int m) {
  return m == 0 && c.sign == Sign::Minus &&
         (c.family == StateFamily::EntangledOpposite || c.family == StateFamily::EntangledSame);
}

// Linearised-dispersion oracle: |<eta|eta e^{-i dw tau}>|^2 for a Gaussian
// spectrum, with dw ~ c (cos theta dk_z + sin theta drho_k).
double dip_oracle(double tau) {
  const double c = kSpeedOfLight, th = kEnv.theta_c();
  const double sz = kEnv.sigma_z(), sr = kEnv.sigma_rho();
  const double a = c * c * tau * tau *
                   (std::cos(th) * std::cos(th) / (sz * sz) + std::sin(th) * std::sin(th) / (sr * sr));
  return 0.5 * (1.0 - std::exp(-a / 4.0));
}

void check_in_range(const HomProbabilities &p) {
  for (double v : {p.p_cc, p.p_dd, p.p_cd}) {
    CHECK(v >= -1e-9);
    CHECK(v <= 1.0 + 1e-9);
  }
}

} // namespace

TEST_CASE("analytic examples") {
  auto po = hom_probabilities_analytic(TwoPhotonState(StateFamily::ProductOpposite, 2, kEnv));
  CHECK(po.p_cc == 0.5);
  CHECK(po.p_dd == 0.5);
  CHECK(po.p_cd == 0.0);
  CHECK(po.method == "analytic");
  CHECK(po.quadrature_error == 0.0);

  auto ps0 = hom_probabilities_analytic(TwoPhotonState(StateFamily::ProductSame, 0, kEnv));
  CHECK(ps0.p_cc == 0.5);
  CHECK(ps0.p_cd == 0.0);
  auto ps1 = hom_probabilities_analytic(TwoPhotonState(StateFamily::ProductSame, 1, kEnv));
  CHECK(ps1.p_cc == 0.25);
  CHECK(ps1.p_dd == 0.25);
  CHECK(ps1.p_cd == 0.5);

  auto pm = hom_probabilities_analytic(
      TwoPhotonState(StateFamily::EntangledSame, 1, kEnv, 0.0, Sign::Minus));
  CHECK(pm.p_cc == 0.0);
  CHECK(pm.p_dd == 0.0);
  CHECK(pm.p_cd == 1.0);

  for (int m = 1; m <= 3; ++m)
    for (auto s : {Sign::Plus, Sign::Minus}) {
      auto p = hom_probabilities_analytic(TwoPhotonState(StateFamily::EntangledOpposite, m, kEnv, 0.0, s));
      CHECK(p.p_cd == 0.0);
    }
  auto pp = hom_probabilities_analytic(TwoPhotonState(StateFamily::EntangledSame, 2, kEnv));
  CHECK(pp.p_cd == 0.0);
}

TEST_CASE("analytic errors") {
  CHECK_THROWS_AS(
      hom_probabilities_analytic(TwoPhotonState(StateFamily::ProductOpposite, 1, kEnv, 1e-13)),
      UnsupportedError);
  CHECK_THROWS_AS(hom_probabilities_analytic(
                      TwoPhotonState(StateFamily::EntangledOpposite, 0, kEnv, 0.0, Sign::Minus)),
                  DomainError);
  CHECK_THROWS_AS(hom_probabilities_numeric(
                      TwoPhotonState(StateFamily::EntangledSame, 0, kEnv, 0.0, Sign::Minus)),
                  DomainError);
  CHECK_THROWS_AS(hom_probabilities_numeric(TwoPhotonState(StateFamily::ProductOpposite, 1, kEnv),
                                            KGrid{15, 48}),
                  DomainError);
}

TEST_CASE("analytic and numeric agree for every family, m = 0..3") {
  for (int m = 0; m <= 3; ++m)
    for (const auto &c : kCases) {
      if (null_state(c, m))
        continue;
      const TwoPhotonState st(c.family, m, kEnv, 0.0, c.sign);
      CAPTURE(st.name());
      CAPTURE(m);
      const auto a = hom_probabilities_analytic(st);
      const auto n = hom_probabilities_numeric(st);
      CHECK(n.method == "numeric");
      CHECK_FALSE(n.flagged);
      CHECK(std::abs(a.p_cc - n.p_cc) <= 1e-3);
      CHECK(std::abs(a.p_dd - n.p_dd) <= 1e-3);
      CHECK(std::abs(a.p_cd - n.p_cd) <= 1e-3);
      CHECK(std::abs(a.total() - 1.0) <= 1e-9);
      CHECK(std::abs(n.total() - 1.0) <= 1e-4);
      CHECK(std::abs(a.p_cc - a.p_dd) <= 1e-9);
      CHECK(std::abs(n.p_cc - n.p_dd) <= 1e-3);
      check_in_range(a);
      check_in_range(n);
    }
}

TEST_CASE("numeric probabilities are m-independent for opposite-sign families") {
  for (const auto &c : {kCases[0], kCases[2], kCases[3]}) {
    const double tau = 0.7 * kEnv.sigma_z() / kSpeedOfLight;
    const auto ref = hom_probabilities_numeric(TwoPhotonState(c.family, 1, kEnv, tau, c.sign));
    for (int m = 2; m <= 5; ++m) {
      const auto p = hom_probabilities_numeric(TwoPhotonState(c.family, m, kEnv, tau, c.sign));
      CHECK(std::abs(p.p_cd - ref.p_cd) <= 1e-6);
      CHECK(std::abs(p.p_cc - ref.p_cc) <= 1e-6);
    }
  }
}

TEST_CASE("delayed product state follows the Gaussian overlap") {
  const TwoPhotonState base(StateFamily::ProductOpposite, 1, kEnv);
  for (double units : {0.25, 0.5, 1.0, 2.0, 3.5}) {
    const double tau = units * kEnv.sigma_z() / kSpeedOfLight;
    const auto p = hom_probabilities_numeric(TwoPhotonState(StateFamily::ProductOpposite, 1, kEnv, tau));
    CAPTURE(units);
    CHECK(std::abs(p.p_cd - dip_oracle(tau)) < 1e-4);
    CHECK(std::abs(p.total() - 1.0) <= 1e-4);
    CHECK(std::abs(p.p_cc - p.p_dd) <= 1e-3);
  }
  const double far = 20.0 * kEnv.sigma_z() / kSpeedOfLight;
  const auto p = hom_probabilities_numeric(TwoPhotonState(StateFamily::ProductOpposite, 1, kEnv, far));
  CHECK(std::abs(p.p_cd - 0.5) < 1e-2);
  CHECK(std::abs(p.p_cc - 0.25) < 1e-2);
}

TEST_CASE("numeric examples at zero delay") {
  const auto po = hom_probabilities_numeric(TwoPhotonState(StateFamily::ProductOpposite, 1, kEnv));
  CHECK(std::abs(po.p_cc - 0.5) < 1e-3);
  CHECK(std::abs(po.p_dd - 0.5) < 1e-3);
  CHECK(std::abs(po.p_cd) < 1e-3);
  const auto pm = hom_probabilities_numeric(
      TwoPhotonState(StateFamily::EntangledSame, 1, kEnv, 0.0, Sign::Minus));
  CHECK(std::abs(pm.p_cd - 1.0) < 1e-3);
}

TEST_CASE("dip scan") {
  const TwoPhotonState st(StateFamily::ProductOpposite, 1, kEnv);
  const auto delays = dip_scan_delays(kEnv, 10.0, 41);
  REQUIRE(delays.size() == 41);
  for (std::size_t i = 0; i < delays.size(); ++i)
    CHECK(delays[i] == -delays[delays.size() - 1 - i]);
  CHECK(delays[20] == 0.0);

  const auto scan = hom_dip_scan(st, delays);
  CHECK(scan.state == "product_opposite(m=1)");
  CHECK_FALSE(scan.flagged);
  const auto &p = scan.p_cd_values;
  REQUIRE(p.size() == delays.size());
  CHECK(p[20] < 1e-3);
  CHECK(std::abs(p.front() - 0.5) < 1e-2);
  CHECK(std::abs(p.back() - 0.5) < 1e-2);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p[i] >= 0.0);
    CHECK(p[i] <= 1.0 + 1e-6);
    CHECK(std::abs(p[i] - p[p.size() - 1 - i]) <= 1e-6);
  }
  // Monotone in |tau| over all pairs.
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      if (std::abs(delays[i]) <= std::abs(delays[j]))
        CHECK(p[i] <= p[j] + 1e-4);

  CHECK_THROWS_AS(hom_dip_scan(st, {0.0, std::nan("")}), DomainError);
  CHECK_THROWS_AS(dip_scan_delays(kEnv, 10.0, 0), DomainError);
}

TEST_CASE("phi_minus gives a peak that relaxes to one half") {
  const TwoPhotonState st(StateFamily::EntangledSame, 1, kEnv, 0.0, Sign::Minus);
  const auto delays = dip_scan_delays(kEnv, 12.0, 13);
  const auto scan = hom_dip_scan(st, delays);
  const auto &p = scan.p_cd_values;
  CHECK(std::abs(p[6] - 1.0) < 1e-3);
  CHECK(std::abs(p.front() - 0.5) < 1e-2);
  for (std::size_t i = 7; i < p.size(); ++i)
    CHECK(p[i] <= p[i - 1] + 1e-4);
}

TEST_CASE("full 3-D cross-check agrees with the reduced engine") {
  struct Probe {
    StateFamily family;
    Sign sign;
    int m;
    double tau_units;
  };
  const Probe probes[] = {
      {StateFamily::ProductOpposite, Sign::Plus, 1, 0.0},
      {StateFamily::ProductOpposite, Sign::Plus, 1, 1.0},
      {StateFamily::ProductSame, Sign::Plus, 0, 0.0},
      {StateFamily::ProductSame, Sign::Plus, 2, 0.0},
      {StateFamily::EntangledSame, Sign::Minus, 1, 0.0},
      {StateFamily::EntangledOpposite, Sign::Plus, 3, 0.0},
  };
  for (const auto &pr : probes) {
    const TwoPhotonState st(pr.family, pr.m, kEnv, pr.tau_units * kEnv.sigma_z() / kSpeedOfLight,
                            pr.sign);
    CAPTURE(st.name());
    CAPTURE(pr.m);
    const auto full = hom_probabilities_full3d(st);
    const auto reduced = hom_probabilities_numeric(st);
    CHECK(full.method == "numeric-3d");
    CHECK(std::abs(full.p_cd - reduced.p_cd) < 2e-3);
    CHECK(std::abs(full.p_cc - reduced.p_cc) < 2e-3);
    CHECK(std::abs(full.total() - 1.0) < 1e-4);
  }
  CHECK(std::abs(hom_probabilities_full3d(TwoPhotonState(StateFamily::ProductOpposite, 1, kEnv,
                                                          kEnv.sigma_z() / kSpeedOfLight))
                     .p_cd -
                 0.5 * (1.0 - std::exp(-0.25))) < 2e-3);
  CHECK_THROWS_AS(hom_probabilities_full3d(TwoPhotonState(StateFamily::ProductSame, 4, kEnv),
                                           Full3dGrid{32, 6, 16}),
                  DomainError);
}

TEST_CASE("masked real-space engine") {
  const double window = 5.3e-4;
  const TransverseProfile profile(TwistedMode(kEnv, 1), window);

  const auto plain = hom_probabilities_masked(profile, PhaseMask::uniform(0.0), 24, 32);
  CHECK(plain.method == "numeric-real-space");
  CHECK(std::abs(plain.p_cd) < 1e-9);
  CHECK(std::abs(plain.p_cc - 0.5) < 1e-9);
  CHECK(std::abs(plain.p_dd - 0.5) < 1e-9);

  // A global phase drops out.
  const auto shifted = hom_probabilities_masked(profile, PhaseMask::uniform(1.234), 24, 32);
  CHECK(std::abs(shifted.p_cd - plain.p_cd) < 1e-12);

  // Quarter sector with a pi step: both overlaps are 1/2.
  const auto sector = hom_probabilities_masked(profile, PhaseMask::sector(0.25, kPi), 24, 32);
  CHECK(std::abs(sector.p_cd - 0.375) < 1e-9);
  CHECK(std::abs(sector.p_cc - 0.3125) < 1e-9);
  CHECK(std::abs(sector.p_dd - 0.3125) < 1e-9);
  CHECK(std::abs(sector.total() - 1.0) < 1e-9);

  // Rotating the sector only changes the discretisation.
  const auto rotated = hom_probabilities_masked(profile, PhaseMask::sector(0.25, kPi, 0.3), 32, 64);
  CHECK(std::abs(rotated.p_cd - 0.375) < 2e-2);
  CHECK(std::abs(rotated.total() - 1.0) < 1e-2);

  CHECK_THROWS_AS(hom_probabilities_masked(profile, PhaseMask::uniform(0.0), 24, 30), DomainError);
  CHECK_THROWS_AS(hom_probabilities_masked(profile, PhaseMask::uniform(0.0), 4, 32), DomainError);
}

TEST_CASE("masked engine: serial and parallel sums are bit-identical") {
  const TransverseProfile profile(TwistedMode(kEnv, 2), 5.3e-4);
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> level(0, 255);
  std::vector<std::uint8_t> levels(16 * 16);
  for (auto &v : levels)
    v = static_cast<std::uint8_t>(level(rng));
  const auto mask = PhaseMask::from_levels(16, 16, levels, 4e-5, 0.0, 0.0, kPi);
  const auto s = hom_probabilities_masked(profile, mask, 24, 32, Execution::Serial);
  const auto p = hom_probabilities_masked(profile, mask, 24, 32, Execution::Parallel);
  CHECK(s.p_cc == p.p_cc);
  CHECK(s.p_dd == p.p_dd);
  CHECK(s.p_cd == p.p_cd);
  CHECK(s.quadrature_error == p.quadrature_error);
  check_in_range(s);
}
