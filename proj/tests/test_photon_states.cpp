#include <doctest.h>

#include <vhom/errors.hpp>
#include <vhom/photon_states.hpp>

#include <cmath>
#include <random>

using namespace vhom;

namespace {

const BesselGaussEnvelope kEnv = BesselGaussEnvelope::reference();

double peak_saf(const BesselGaussEnvelope &e) {
  const double sz = e.sigma_z(), sr = e.sigma_rho(), rc = e.rho_k_c();
  return std::pow(2.0 * sz * sz / kPi, 0.25) * std::pow(2.0 * sr * sr / (kPi * rc * rc), 0.25);
}

// Integral of |eta|^2 over (k_z, rho_k) with rho_k drho_k, by 2-D Gauss-Legendre.
double reduced_saf_norm(const BesselGaussEnvelope &e) {
  const auto &rule = cached_gauss_legendre(200);
  std::vector<double> kz, wz, rk, wr;
  rule.map_to(e.kz_c() - 8.0 / e.sigma_z(), e.kz_c() + 8.0 / e.sigma_z(), kz, wz);
  rule.map_to(std::max(0.0, e.rho_k_c() - 8.0 / e.sigma_rho()), e.rho_k_c() + 8.0 / e.sigma_rho(),
              rk, wr);
  double s = 0.0;
  for (std::size_t i = 0; i < kz.size(); ++i)
    for (std::size_t j = 0; j < rk.size(); ++j) {
      const double v = saf_envelope(e, kz[i], rk[j]);
      s += wz[i] * wr[j] * rk[j] * v * v;
    }
  return s;
}

Position random_position(std::mt19937_64 &rng, double extent) {
  std::uniform_real_distribution<double> u(-extent, extent);
  std::uniform_real_distribution<double> uz(-2e-4, 2e-4);
  return {u(rng), u(rng), uz(rng)};
}

std::vector<TwoPhotonState> all_states(int m, double tau = 0.0) {
  std::vector<TwoPhotonState> out;
  for (auto fam : {StateFamily::ProductOpposite, StateFamily::ProductSame,
                   StateFamily::EntangledOpposite, StateFamily::EntangledSame})
    for (auto s : {Sign::Plus, Sign::Minus}) {
      const bool product =
          fam == StateFamily::ProductOpposite || fam == StateFamily::ProductSame;
      if (product && s == Sign::Minus)
        continue;
      out.emplace_back(fam, m, kEnv, tau, s);
    }
  return out;
}

} // namespace

TEST_CASE("envelope derived quantities and validation") {
  CHECK(kEnv.wavelength() == doctest::Approx(500e-9).epsilon(1e-14));
  CHECK(kEnv.sigma_z() == doctest::Approx(0.5e-3).epsilon(1e-14));
  CHECK(kEnv.kz_c() > 0.0);
  CHECK(kEnv.rho_k_c() == doctest::Approx(3.9478e4).epsilon(1e-4));
  CHECK(kEnv.omega_c() == doctest::Approx(kSpeedOfLight * kEnv.k_c()));
  CHECK_THROWS_AS(BesselGaussEnvelope(0.0, 1e-3, 1e7, 0.1), DomainError);
  CHECK_THROWS_AS(BesselGaussEnvelope(1e-3, -1e-3, 1e7, 0.1), DomainError);
  CHECK_THROWS_AS(BesselGaussEnvelope(1e-3, 1e-3, 0.0, 0.1), DomainError);
  CHECK_THROWS_AS(BesselGaussEnvelope(1e-3, 1e-3, 1e7, 0.0), DomainError);
  CHECK_THROWS_AS(BesselGaussEnvelope(1e-3, 1e-3, 1e7, kPi / 2), DomainError);
  CHECK_THROWS_AS(TwistedMode(kEnv, 61), DomainError);
  CHECK_NOTHROW(TwistedMode(kEnv, -60));
}

TEST_CASE("saf_envelope examples") {
  const double peak = peak_saf(kEnv);
  CHECK(saf_envelope(kEnv, kEnv.kz_c(), kEnv.rho_k_c()) == doctest::Approx(peak).epsilon(1e-14));
  CHECK(saf_envelope(kEnv, kEnv.kz_c() + 1.0 / kEnv.sigma_z(), kEnv.rho_k_c()) ==
        doctest::Approx(peak * std::exp(-1.0)).epsilon(1e-12));
  CHECK(saf_envelope(kEnv, kEnv.kz_c(), kEnv.rho_k_c() + 1.0 / kEnv.sigma_rho()) ==
        doctest::Approx(peak * std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("saf normalization") {
  const double reduced = reduced_saf_norm(kEnv);
  CHECK(std::abs(reduced - 1.0) < 2e-3);
  // The azimuthal integral contributes 2 pi since eta does not depend on phi_k.
  CHECK(std::abs(kTwoPi * reduced - kTwoPi) < kTwoPi * 2e-3);
}

TEST_CASE("detuning is free of cancellation") {
  for (double dz : {-3.0, -1e-3, 0.0, 1e-6, 2.5})
    for (double dr : {-2.0, 0.0, 1e-4, 3.0}) {
      const double kz = kEnv.kz_c() + dz / kEnv.sigma_z();
      const double rk = kEnv.rho_k_c() + dr / kEnv.sigma_rho();
      // Long-double reference for c (|k| - k_c).
      const long double k = std::sqrt((long double)kz * kz + (long double)rk * rk);
      const long double ref = (long double)kSpeedOfLight * (k - (long double)kEnv.k_c());
      // kz_c and rho_k_c are themselves rounded, so |k| = k_c carries ~1 rad/s slack.
      const double got = detuning(kEnv, kz, rk);
      CHECK(std::abs(got - (double)ref) <= 1e-9 * std::abs((double)ref) + 1.0);
    }
  CHECK(detuning(kEnv, kEnv.kz_c(), kEnv.rho_k_c()) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("two_photon_saf delay acts as a phase on path B") {
  const WaveVector k{kEnv.kz_c() + 0.3 / kEnv.sigma_z(), kEnv.rho_k_c(), 0.4};
  const WaveVector kp{kEnv.kz_c() - 0.7 / kEnv.sigma_z(), kEnv.rho_k_c() + 0.2 / kEnv.sigma_rho(),
                      -1.1};
  const double tau = 1.3e-12;
  const TwoPhotonState s0(StateFamily::ProductOpposite, 2, kEnv);
  const TwoPhotonState s1(StateFamily::ProductOpposite, 2, kEnv, tau);
  const Complex a = two_photon_saf(s0, k, kp);
  const Complex b = two_photon_saf(s1, k, kp);
  CHECK(std::abs(std::abs(a) - std::abs(b)) < 1e-12 * std::abs(a));
  const double omega = kSpeedOfLight * std::hypot(kp.kz, kp.rho);
  const Complex expected = a * std::polar(1.0, -std::fmod(omega * tau, kTwoPi));
  CHECK(std::abs(b - expected) < 1e-6 * std::abs(a));
  // Swapping k and k' with the delay on: only k' carries the phase.
  const Complex c = two_photon_saf(s1, kp, k);
  const double omega_k = kSpeedOfLight * std::hypot(k.kz, k.rho);
  CHECK(std::abs(std::arg(c / two_photon_saf(s0, kp, k)) -
                 std::remainder(-omega_k * tau, kTwoPi)) < 1e-6);
}

TEST_CASE("eta_tilde_closed examples") {
  const TwistedMode m1(kEnv, 1), m0(kEnv, 0);
  CHECK(std::abs(eta_tilde_closed(m1, 0.0, 1e-4, 2e-13)) == 0.0);
  const double t = 1e-12;
  const double z = kSpeedOfLight * t / std::cos(kEnv.theta_c());
  const double expected = std::sqrt(kEnv.rho_k_c() / (kEnv.sigma_z() * kEnv.sigma_rho()));
  CHECK(std::abs(eta_tilde_closed(m0, 0.0, z, t)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("eta_tilde_closed agrees with quadrature in the main lobe") {
  std::mt19937_64 rng(2024);
  // The dropped transverse roll-off grows with m: about 0.7% of peak at m = 2,
  // just over 1% at m = 3.
  for (int m : {0, 1, 2, 3}) {
    const double tol = m <= 2 ? 1e-2 : 1.5e-2;
    const TwistedMode mode(kEnv, m);
    const double lobe = bessel_first_zero(m) / kEnv.rho_k_c();
    std::uniform_real_distribution<double> urho(0.0, lobe);
    std::uniform_real_distribution<double> ut(-1.0, 1.0);
    // Global max of |eta-tilde|: pulse centre, on the brightest ring.
    double jmax = 0.0;
    for (double x = 0.0; x < 20.0; x += 1e-3)
      jmax = std::max(jmax, std::abs(bessel_j(m, x)));
    const double peak = jmax * std::sqrt(kEnv.rho_k_c() / (kEnv.sigma_z() * kEnv.sigma_rho()));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double t = ut(rng) * kEnv.sigma_z() / kSpeedOfLight;
      const double z = kSpeedOfLight * t / std::cos(kEnv.theta_c()) + ut(rng) * kEnv.sigma_z();
      const double rho = urho(rng);
      const auto q = eta_tilde_quadrature(mode, rho, z, t, 64);
      CHECK(q.converged);
      CHECK(std::abs(q.value) <= peak * 1.01);
      worst = std::max(worst, std::abs(eta_tilde_closed(mode, rho, z, t) - q.value));
    }
    CHECK(worst / peak < tol);
  }
}

TEST_CASE("eta_tilde_quadrature is even in m") {
  for (int m : {1, 2, 5})
    for (double rho : {0.0, 3e-5, 1.2e-4}) {
      const auto a = eta_tilde_quadrature(TwistedMode(kEnv, m), rho, 1e-4, 1e-13, 48);
      const auto b = eta_tilde_quadrature(TwistedMode(kEnv, -m), rho, 1e-4, 1e-13, 48);
      CHECK(std::abs(a.value - b.value) <= 1e-12 * std::max(1.0, std::abs(a.value)));
    }
}

TEST_CASE("eta_tilde_quadrature on axis reduces to a 1-D k_z integral") {
  const TwistedMode mode(kEnv, 0);
  const double sz = kEnv.sigma_z(), sr = kEnv.sigma_rho(), rc = kEnv.rho_k_c();
  for (double z : {0.0, 2e-4, -7e-4}) {
    // Closed-form Gaussian integrals of the separable (t = 0) integrand.
    const double az = std::pow(2.0 * sz * sz / kPi, 0.25) * std::sqrt(kPi) / sz *
                      std::exp(-z * z / (4.0 * sz * sz));
    const Complex kz_part = az * std::polar(1.0, std::fmod(kEnv.kz_c() * z, kTwoPi));
    const double rho_part = std::pow(2.0 * sr * sr / (kPi * rc * rc), 0.25) * rc * std::sqrt(kPi) / sr;
    const Complex oracle = kz_part * rho_part / std::sqrt(kTwoPi);
    const auto q = eta_tilde_quadrature(mode, 0.0, z, 0.0, 128);
    CHECK(std::abs(q.value - oracle) < 1e-10 * std::abs(oracle));
  }
}

TEST_CASE("real-space normalization of the wave packet") {
  const TwistedMode mode(kEnv, 1);
  const auto &rz = cached_gauss_legendre(12);
  const auto &rr = cached_gauss_legendre(160);
  std::vector<double> z, wz, rho, wr;
  rz.map_to(-6.0 * kEnv.sigma_z(), 6.0 * kEnv.sigma_z(), z, wz);
  rr.map_to(0.0, 4.0 * kEnv.sigma_rho(), rho, wr);
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = 0; j < rho.size(); ++j) {
      const Complex v = eta_tilde_quadrature(mode, rho[j], z[i], 0.0, 64).value;
      total += wz[i] * wr[j] * rho[j] * std::norm(v);
    }
  total *= kTwoPi; // |e^{i m phi}|^2 integrates to 2 pi
  CHECK(std::abs(total - kTwoPi) < 1e-2 * kTwoPi);
}

TEST_CASE("eta_tilde_quadrature validation") {
  const TwistedMode mode(kEnv, 1);
  CHECK_THROWS_AS(eta_tilde_quadrature(mode, 0.0, 0.0, 0.0, 31), DomainError);
  CHECK_THROWS_AS(eta_tilde_quadrature(mode, -1e-6, 0.0, 0.0, 64), DomainError);
  // A far-off time puts the pulse outside the sampled spectral phase range.
  const auto poor = eta_tilde_quadrature(mode, 5e-5, 0.0, 5e-9, 32);
  CHECK_FALSE(poor.converged);
}

TEST_CASE("bessel zeros and disk mass") {
  CHECK(bessel_zero(0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-13));
  CHECK(bessel_zero(1, 1) == doctest::Approx(3.831705970207512).epsilon(1e-13));
  CHECK(bessel_zero(1, 2) == doctest::Approx(7.015586669815619).epsilon(1e-13));
  CHECK(bessel_zero(2, 1) == doctest::Approx(5.135622301840683).epsilon(1e-13));
  CHECK(bessel_first_zero(-3) == bessel_zero(3, 1));
  CHECK_THROWS_AS(bessel_zero(1, 0), DomainError);

  const auto &rule = cached_gauss_legendre(400);
  std::vector<double> x, w;
  const double a = kEnv.rho_k_c(), radius = 5e-4;
  rule.map_to(0.0, radius, x, w);
  for (int m : {0, 1, 4, -2}) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double j = bessel_j(m, a * x[i]);
      s += w[i] * x[i] * j * j;
    }
    CHECK(bessel_disk_mass(m, a, radius) == doctest::Approx(kTwoPi * s).epsilon(1e-11));
  }
}

TEST_CASE("transverse profile") {
  const double window = 5.3e-4;
  for (int m = 0; m <= 4; ++m) {
    const TransverseProfile p(TwistedMode(kEnv, m), window);
    CHECK(p.main_lobe_fraction() >= 0.5);
    const auto &rule = cached_gauss_legendre(600);
    std::vector<double> x, w;
    rule.map_to(0.0, window, x, w);
    double mass = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      mass += w[i] * x[i] * p.density(x[i]);
    CHECK(std::abs(kTwoPi * mass - 1.0) < 1e-9);
    CHECK(p.density(window * 1.01) == 0.0);
  }
  CHECK(TransverseProfile(TwistedMode(kEnv, 1), window).density(0.0) == 0.0);

  double previous = 0.0;
  for (int m = 1; m <= 4; ++m) {
    const auto samples = transverse_profile(TwistedMode(kEnv, m), window, 20000);
    auto best = samples.front();
    for (const auto &s : samples)
      if (s.density > best.density)
        best = s;
    CHECK(best.rho > previous);
    previous = best.rho;
  }

  CHECK_THROWS_AS(TransverseProfile(TwistedMode(kEnv, 1), 1e-5), WindowError);
  CHECK_THROWS_AS(TransverseProfile(TwistedMode(kEnv, 1), 0.0), WindowError);
  CHECK_THROWS_AS(transverse_profile(TwistedMode(kEnv, 1), window, 63), DomainError);
}

TEST_CASE("reflections are involutions") {
  const Position r{1.0, 2.0, 3.0};
  CHECK(reflect_position(r) == Position{1.0, -2.0, 3.0});
  CHECK(reflect_position(reflect_position(r)) == r);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto p = random_position(rng, 1e-4);
    CHECK(reflect_position(p).phi() == -p.phi());
  }
  CHECK(reflect_mode(TwistedMode(kEnv, 3)).m == -3);
  CHECK(reflect_mode(TwistedMode(kEnv, 0)).m == 0);
  CHECK(reflect_mode(reflect_mode(TwistedMode(kEnv, 5))).m == 5);
}

TEST_CASE("state families") {
  for (int m : {1, 2}) {
    CHECK(TwoPhotonState(StateFamily::ProductOpposite, m, kEnv).bar_exchange() ==
          BarExchange::Symmetric);
    CHECK(TwoPhotonState(StateFamily::ProductSame, m, kEnv).bar_exchange() == BarExchange::Neither);
    CHECK(TwoPhotonState(StateFamily::EntangledOpposite, m, kEnv).bar_exchange() ==
          BarExchange::Symmetric);
    CHECK(TwoPhotonState(StateFamily::EntangledOpposite, m, kEnv, 0.0, Sign::Minus)
              .bar_exchange() == BarExchange::Symmetric);
    CHECK(TwoPhotonState(StateFamily::EntangledSame, m, kEnv).bar_exchange() ==
          BarExchange::Symmetric);
    CHECK(TwoPhotonState(StateFamily::EntangledSame, m, kEnv, 0.0, Sign::Minus).bar_exchange() ==
          BarExchange::Antisymmetric);
  }
  CHECK(TwoPhotonState(StateFamily::ProductOpposite, 1, kEnv).normalization() == 1.0);
  CHECK(TwoPhotonState(StateFamily::EntangledSame, 1, kEnv).normalization() ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  for (const auto &s : all_states(2)) {
    StateFamily f;
    Sign g;
    parse_family(s.name(), f, g);
    CHECK(f == s.family);
    if (s.entangled())
      CHECK(g == s.sign);
  }
  StateFamily f;
  Sign g;
  CHECK_THROWS_AS(parse_family("psi", f, g), DomainError);
}

TEST_CASE("xi_cd examples") {
  std::mt19937_64 rng(11);
  const auto mask0 = PhaseMask::uniform(0.0);
  for (int m : {1, 2}) {
    const TwoPhotonState psi_p(StateFamily::EntangledOpposite, m, kEnv);
    const TwoPhotonState psi_m(StateFamily::EntangledOpposite, m, kEnv, 0.0, Sign::Minus);
    const TwoPhotonState phi_m(StateFamily::EntangledSame, m, kEnv, 0.0, Sign::Minus);
    const TwoPhotonState prod(StateFamily::ProductOpposite, m, kEnv);
    for (int i = 0; i < 40; ++i) {
      const auto r = random_position(rng, 2e-4), rp = random_position(rng, 2e-4);
      const double t = 2e-4 / kSpeedOfLight;
      const double scale = std::abs(xi_tilde(prod, nullptr, r, rp, t)) + 1e-300;
      CHECK(std::abs(xi_cd(psi_p, nullptr, r, rp, t)) <= 1e-12 * scale);
      CHECK(std::abs(xi_cd(psi_m, nullptr, r, rp, t)) <= 1e-12 * scale);
      CHECK(std::abs(xi_cd(prod, &mask0, r, rp, t)) <= 1e-12 * scale);
      const Complex x = xi_tilde(phi_m, nullptr, r, rp, t);
      CHECK(std::abs(xi_cd(phi_m, nullptr, r, rp, t) - 2.0 * x) <= 1e-12 * (std::abs(x) + scale));
    }
  }
}

TEST_CASE("xi_cd is antisymmetric under bar exchange for every family and mask") {
  std::mt19937_64 rng(5);
  const PhaseMask masks[] = {PhaseMask::uniform(0.7), PhaseMask::sector(0.3, 2.0, 0.4),
                             PhaseMask::checkerboard(4e-5, kPi, 1e-5, -2e-5)};
  for (const auto &s : all_states(3, 2e-13))
    for (const auto &mask : masks)
      for (int i = 0; i < 10; ++i) {
        const auto r = random_position(rng, 2e-4), rp = random_position(rng, 2e-4);
        const Complex a = xi_cd(s, &mask, r, rp, 1e-13);
        const Complex b = xi_cd(s, &mask, reflect_position(rp), reflect_position(r), 1e-13);
        CHECK(a == -b);
      }
}

TEST_CASE("wave packet factors are independent of phi") {
  const TwistedMode mode(kEnv, 2);
  const TwoPhotonState s(StateFamily::ProductOpposite, 2, kEnv);
  // Rotating both points by the same angle leaves the opposite-m product unchanged.
  const double rho = 6e-5, rho_p = 1.1e-4, a = 0.35;
  const Position r{rho * std::cos(0.2), rho * std::sin(0.2), 0.0};
  const Position rp{rho_p * std::cos(1.3), rho_p * std::sin(1.3), 0.0};
  const Position r2{rho * std::cos(0.2 + a), rho * std::sin(0.2 + a), 0.0};
  const Position rp2{rho_p * std::cos(1.3 + a), rho_p * std::sin(1.3 + a), 0.0};
  const Complex v1 = xi_tilde(s, nullptr, r, rp, 0.0), v2 = xi_tilde(s, nullptr, r2, rp2, 0.0);
  CHECK(std::abs(v1 - v2) < 1e-9 * std::abs(v1));
  const Complex expected = eta_tilde_closed(mode, rho, 0.0, 0.0) *
                           eta_tilde_closed(mode, rho_p, 0.0, 0.0) *
                           std::polar(1.0, 2.0 * (0.2 - 1.3));
  CHECK(std::abs(v1 - expected) < 1e-9 * std::abs(v1));
}

TEST_CASE("coherence_area") {
  CHECK(coherence_area(1.0, 1.0, 1.0) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(coherence_area(2.0, 3.0, 0.5) == doctest::Approx(4.0 * coherence_area(1.0, 3.0, 0.5)));
  const double k0 = kTwoPi / 500e-9;
  CHECK(coherence_area(1.0, k0, 1e-3) == doctest::Approx(kPi / (k0 * k0 * 1e-6)).epsilon(1e-14));
  CHECK_THROWS_AS(coherence_area(0.0, 1.0, 1.0), DomainError);
}
