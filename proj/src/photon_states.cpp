#include <vhom/errors.hpp>
#include <vhom/photon_states.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vhom {

BesselGaussEnvelope::BesselGaussEnvelope(double sigma_z, double sigma_rho, double k_c,
                                         double theta_c)
    : sigma_z_(sigma_z), sigma_rho_(sigma_rho), k_c_(k_c), theta_c_(theta_c) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(sigma_z) || !positive(sigma_rho) || !positive(k_c))
    throw DomainError("envelope: sigma_z, sigma_rho and k_c must be positive");
  if (!(theta_c > 0.0 && theta_c < 0.5 * kPi))
    throw DomainError("envelope: theta_c must lie in (0, pi/2)");
}

BesselGaussEnvelope BesselGaussEnvelope::from_wavelength(double wavelength, double sigma_z,
                                                         double sigma_rho, double theta_c) {
  if (!(wavelength > 0.0) || !std::isfinite(wavelength))
    throw DomainError("envelope: wavelength must be positive");
  return {sigma_z, sigma_rho, kTwoPi / wavelength, theta_c};
}

BesselGaussEnvelope BesselGaussEnvelope::reference() {
  constexpr double lambda = 500e-9;
  return from_wavelength(lambda, 1000.0 * lambda, 1000.0 * lambda, 0.001 * kPi);
}

TwistedMode::TwistedMode(BesselGaussEnvelope envelope, int m) : envelope(envelope), m(m) {
  if (std::abs(m) > kMaxBesselOrder)
    throw DomainError("twisted mode: |m| must not exceed 60");
}

// ---------------------------------------------------------------------------
// Two-photon states

TwoPhotonState::TwoPhotonState(StateFamily family, int m, BesselGaussEnvelope envelope,
                               double delay_tau, Sign sign)
    : family(family), sign(sign), m(m), envelope(envelope), delay_tau(delay_tau) {
  if (std::abs(m) > kMaxBesselOrder)
    throw DomainError("two-photon state: |m| must not exceed 60");
  if (!std::isfinite(delay_tau))
    throw DomainError("two-photon state: delay must be finite");
}

double TwoPhotonState::normalization() const { return entangled() ? 1.0 / std::sqrt(2.0) : 1.0; }

std::vector<HelicalTerm> TwoPhotonState::terms() const {
  const double n = normalization();
  const double s = sign == Sign::Plus ? 1.0 : -1.0;
  switch (family) {
  case StateFamily::ProductOpposite:
    return {{n, m, -m}};
  case StateFamily::ProductSame:
    return {{n, m, m}};
  case StateFamily::EntangledOpposite:
    return {{n, m, -m}, {s * n, -m, m}};
  case StateFamily::EntangledSame:
    return {{n, m, m}, {s * n, -m, -m}};
  }
  return {};
}

namespace {

// Collapses equal (a, b) pairs so term lists can be compared.
std::vector<HelicalTerm> canonical(std::vector<HelicalTerm> terms) {
  std::sort(terms.begin(), terms.end(), [](const HelicalTerm &l, const HelicalTerm &r) {
    return l.a != r.a ? l.a < r.a : l.b < r.b;
  });
  std::vector<HelicalTerm> out;
  for (const auto &t : terms) {
    if (!out.empty() && out.back().a == t.a && out.back().b == t.b)
      out.back().coeff += t.coeff;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const HelicalTerm &t) { return std::abs(t.coeff) == 0.0; });
  return out;
}

bool same_terms(const std::vector<HelicalTerm> &l, const std::vector<HelicalTerm> &r,
                double factor) {
  if (l.size() != r.size())
    return false;
  for (std::size_t i = 0; i < l.size(); ++i)
    if (l[i].a != r[i].a || l[i].b != r[i].b || std::abs(l[i].coeff - factor * r[i].coeff) > 1e-15)
      return false;
  return true;
}

} // namespace

BarExchange TwoPhotonState::bar_exchange() const {
  // xi(r-bar', r-bar): the term e^{i(a phi + b phi')} becomes e^{i(-b phi - a phi')}.
  auto original = canonical(terms());
  std::vector<HelicalTerm> swapped;
  for (const auto &t : terms())
    swapped.push_back({t.coeff, -t.b, -t.a});
  swapped = canonical(std::move(swapped));
  if (same_terms(swapped, original, 1.0))
    return BarExchange::Symmetric;
  if (same_terms(swapped, original, -1.0))
    return BarExchange::Antisymmetric;
  return BarExchange::Neither;
}

std::string TwoPhotonState::name() const {
  const char *suffix = sign == Sign::Plus ? "plus" : "minus";
  switch (family) {
  case StateFamily::ProductOpposite:
    return "product_opposite";
  case StateFamily::ProductSame:
    return "product_same";
  case StateFamily::EntangledOpposite:
    return std::string("psi_") + suffix;
  case StateFamily::EntangledSame:
    return std::string("phi_") + suffix;
  }
  return "unknown";
}

void parse_family(std::string_view name, StateFamily &family, Sign &sign) {
  sign = Sign::Plus;
  if (name == "product_opposite")
    family = StateFamily::ProductOpposite;
  else if (name == "product_same")
    family = StateFamily::ProductSame;
  else if (name == "psi_plus" || name == "psi_minus") {
    family = StateFamily::EntangledOpposite;
    sign = name == "psi_plus" ? Sign::Plus : Sign::Minus;
  } else if (name == "phi_plus" || name == "phi_minus") {
    family = StateFamily::EntangledSame;
    sign = name == "phi_plus" ? Sign::Plus : Sign::Minus;
  } else
    throw DomainError("unknown state family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Spectral side

double saf_envelope(const BesselGaussEnvelope &env, double k_z, double rho_k) {
  const double sz = env.sigma_z();
  const double sr = env.sigma_rho();
  const double rc = env.rho_k_c();
  const double dz = k_z - env.kz_c();
  const double dr = rho_k - rc;
  const double longitudinal = std::pow(2.0 * sz * sz / kPi, 0.25) * std::exp(-sz * sz * dz * dz);
  const double transverse =
      std::pow(2.0 * sr * sr / (kPi * rc * rc), 0.25) * std::exp(-sr * sr * dr * dr);
  return longitudinal * transverse;
}

double detuning(const BesselGaussEnvelope &env, double k_z, double rho_k) {
  const double kzc = env.kz_c();
  const double rc = env.rho_k_c();
  const double excess = (k_z - kzc) * (k_z + kzc) + (rho_k - rc) * (rho_k + rc);
  const double k = std::sqrt(k_z * k_z + rho_k * rho_k);
  return kSpeedOfLight * excess / (k + env.k_c());
}

Complex two_photon_saf(const TwoPhotonState &state, const WaveVector &k, const WaveVector &kp) {
  const auto &env = state.envelope;
  Complex helical{0.0, 0.0};
  for (const auto &t : state.terms())
    helical += t.coeff * std::polar(1.0, t.a * k.phi + t.b * kp.phi);
  Complex value = saf_envelope(env, k.kz, k.rho) * saf_envelope(env, kp.kz, kp.rho) * helical;
  if (state.delay_tau != 0.0) {
    const double tau = state.delay_tau;
    value *= std::polar(1.0, -detuning(env, kp.kz, kp.rho) * tau) *
             std::polar(1.0, -std::fmod(env.omega_c() * tau, kTwoPi));
  }
  return value;
}

// ---------------------------------------------------------------------------
// Real-space wave packets

namespace {

// e^{i(kz_c z - omega_c t)} with the large phases reduced first.
Complex carrier(const BesselGaussEnvelope &env, double z, double t) {
  const double a = std::fmod(env.kz_c() * z, kTwoPi);
  const double b = std::fmod(env.omega_c() * t, kTwoPi);
  return std::polar(1.0, a - b);
}

} // namespace

Complex eta_tilde_closed(const TwistedMode &mode, double rho, double z, double t) {
  const auto &env = mode.envelope;
  const double rc = env.rho_k_c();
  const double cos_t = std::cos(env.theta_c());
  const double amplitude = std::sqrt(rc / (env.sigma_z() * env.sigma_rho()));
  const double lag = kSpeedOfLight * t - z * cos_t;
  const double sz = env.sigma_z();
  const double envelope = std::exp(-lag * lag / (4.0 * sz * sz * cos_t * cos_t));
  return i_pow(mode.m) * amplitude * bessel_j(mode.m, rho * rc) * envelope * carrier(env, z, t);
}

namespace {

Complex eta_tilde_sum(const TwistedMode &mode, double rho, double z, double t, int n) {
  const auto &env = mode.envelope;
  const double kzc = env.kz_c();
  const double rc = env.rho_k_c();
  const double half_z = 6.0 / env.sigma_z();
  const double half_r = 6.0 / env.sigma_rho();
  const auto &rule = cached_gauss_legendre(n);
  std::vector<double> kz, wz, rk, wr;
  rule.map_to(kzc - half_z, kzc + half_z, kz, wz);
  rule.map_to(std::max(0.0, rc - half_r), rc + half_r, rk, wr);

  std::vector<Complex> along_z(n);
  Complex total{0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    const double radial = wr[j] * rk[j] * bessel_j(mode.m, rho * rk[j]);
    if (radial == 0.0)
      continue;
    Complex row{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      const double phase = (kz[i] - kzc) * z - detuning(env, kz[i], rk[j]) * t;
      row += wz[i] * saf_envelope(env, kz[i], rk[j]) * std::polar(1.0, phase);
    }
    total += radial * row;
  }
  return i_pow(mode.m) / std::sqrt(kTwoPi) * total * carrier(env, z, t);
}

} // namespace

QuadratureValue eta_tilde_quadrature(const TwistedMode &mode, double rho, double z, double t,
                                     int resolution) {
  if (resolution < 32 || resolution > 2048)
    throw DomainError("eta_tilde_quadrature: resolution must lie in [32, 2048]");
  if (!(rho >= 0.0))
    throw DomainError("eta_tilde_quadrature: rho must be non-negative");
  QuadratureValue out;
  out.value = eta_tilde_sum(mode, rho, z, t, resolution);
  const Complex coarse = eta_tilde_sum(mode, rho, z, t, resolution / 2);
  const double scale = std::abs(out.value);
  const double diff = std::abs(out.value - coarse);
  out.relative_change = scale > 0.0 ? diff / scale : diff;
  out.converged = out.relative_change <= 1e-4;
  return out;
}

// ---------------------------------------------------------------------------
// Transverse profile

double bessel_disk_mass(int m, double a, double radius) {
  m = std::abs(m);
  const double x = a * radius;
  if (x == 0.0)
    return 0.0;
  const double jm = bessel_j(m, x);
  const double jm_prev = bessel_j(m - 1, x);
  const double jm_next = 2.0 * m / x * jm - jm_prev;
  return kPi * radius * radius * (jm * jm - jm_prev * jm_next);
}

double bessel_zero(int m, int k) {
  m = std::abs(m);
  if (m > kMaxBesselOrder)
    throw DomainError("bessel_zero: |m| must not exceed 60");
  if (k < 1 || k > 1000)
    throw DomainError("bessel_zero: k must lie in [1, 1000]");
  // Zeros are more than pi/2 apart, so a 0.05 scan cannot skip one.
  double lo = std::max(0.5, static_cast<double>(m));
  double hi = lo;
  for (int found = 0;;) {
    hi = lo + 0.05;
    if ((bessel_j(m, lo) > 0.0) != (bessel_j(m, hi) > 0.0) && ++found == k)
      break;
    lo = hi;
  }
  const bool positive_low = bessel_j(m, lo) > 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((bessel_j(m, mid) > 0.0) == positive_low ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TransverseProfile::TransverseProfile(const TwistedMode &mode, double window)
    : m_(mode.m), rho_k_c_(mode.envelope.rho_k_c()), window_(window) {
  if (!(window > 0.0) || !std::isfinite(window))
    throw WindowError("transverse profile: window must be positive");
  norm_ = bessel_disk_mass(m_, rho_k_c_, window_);
  const double lobe = bessel_disk_mass(m_, rho_k_c_, bessel_first_zero(m_) / rho_k_c_);
  lobe_fraction_ = norm_ / lobe;
  if (lobe_fraction_ < 0.5) {
    std::ostringstream os;
    os << "transverse profile: window " << window << " m captures only " << lobe_fraction_
       << " of the m=" << m_ << " main lobe (need >= 0.5)";
    throw WindowError(os.str());
  }
}

double TransverseProfile::amplitude(double rho) const {
  if (rho > window_)
    return 0.0;
  return bessel_j(m_, rho * rho_k_c_) / std::sqrt(norm_);
}

double TransverseProfile::density(double rho) const {
  const double a = amplitude(rho);
  return a * a;
}

std::vector<RadialSample> TransverseProfile::sample(int n_samples) const {
  if (n_samples < 2)
    throw DomainError("transverse profile: need at least two samples");
  std::vector<RadialSample> out(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double rho = window_ * i / (n_samples - 1);
    out[i] = {rho, density(rho)};
  }
  return out;
}

std::vector<RadialSample> transverse_profile(const TwistedMode &mode, double rho_max,
                                             int n_samples) {
  if (n_samples < 64)
    throw DomainError("transverse_profile: need at least 64 samples");
  return TransverseProfile(mode, rho_max).sample(n_samples);
}

// ---------------------------------------------------------------------------
// Beam splitter geometry

Position reflect_position(const Position &r) { return {r.x, -r.y, r.z}; }

TwistedMode reflect_mode(const TwistedMode &mode) { return {mode.envelope, -mode.m}; }

Complex xi_tilde(const TwoPhotonState &state, const PhaseMask *mask, const Position &r,
                 const Position &rp, double t) {
  const TwistedMode mode(state.envelope, state.m);
  const Complex eta_a = eta_tilde_closed(mode, r.rho(), r.z, t);
  const Complex eta_b = eta_tilde_closed(mode, rp.rho(), rp.z, t + state.delay_tau);
  const double phi = r.phi();
  const double phi_p = rp.phi();
  Complex helical{0.0, 0.0};
  for (const auto &term : state.terms())
    helical += term.coeff * std::polar(1.0, term.a * phi + term.b * phi_p);
  Complex value = eta_a * eta_b * helical;
  if (mask != nullptr)
    value *= std::polar(1.0, mask->phase(r.x, r.y));
  return value;
}

Complex xi_cd(const TwoPhotonState &state, const PhaseMask *mask, const Position &r,
              const Position &rp, double t) {
  return xi_tilde(state, mask, r, rp, t) -
         xi_tilde(state, mask, reflect_position(rp), reflect_position(r), t);
}

double coherence_area(double distance, double k0, double sigma) {
  if (!(distance > 0.0 && k0 > 0.0 && sigma > 0.0))
    throw DomainError("coherence_area: arguments must be positive");
  return kPi * distance * distance / (k0 * k0 * sigma * sigma);
}

} // namespace vhom
