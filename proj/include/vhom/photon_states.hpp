#pragma once
#include <vhom/core_math.hpp>
#include <vhom/phase_mask.hpp>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace vhom {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

/// Spectral envelope of a Bessel pulse with Gaussian spreads along k_z and
/// across the cone radius rho_k. SI units throughout.
class BesselGaussEnvelope {
public:
  /// Throws DomainError unless sigma_z, sigma_rho, k_c > 0 and 0 < theta_c < pi/2.
  BesselGaussEnvelope(double sigma_z, double sigma_rho, double k_c, double theta_c);

  static BesselGaussEnvelope from_wavelength(double wavelength, double sigma_z, double sigma_rho,
                                             double theta_c);
  /// lambda_c = 500 nm, sigma_z = sigma_rho = 1000 lambda_c, theta_c = 0.001 pi.
  static BesselGaussEnvelope reference();

  double sigma_z() const { return sigma_z_; }
  double sigma_rho() const { return sigma_rho_; }
  double k_c() const { return k_c_; }
  double theta_c() const { return theta_c_; }
  double wavelength() const { return kTwoPi / k_c_; }
  double kz_c() const { return k_c_ * std::cos(theta_c_); }
  double rho_k_c() const { return k_c_ * std::sin(theta_c_); }
  double omega_c() const { return kSpeedOfLight * k_c_; }

private:
  double sigma_z_, sigma_rho_, k_c_, theta_c_;
};

/// Single photon of OAM m on a Bessel-Gauss envelope.
struct TwistedMode {
  /// Throws DomainError if |m| > 60.
  TwistedMode(BesselGaussEnvelope envelope, int m);

  BesselGaussEnvelope envelope;
  int m;
};

enum class StateFamily {
  ProductOpposite,   // eta(k) eta(k') e^{i m (phi - phi')}
  ProductSame,       // eta(k) eta(k') e^{i m (phi + phi')}
  EntangledOpposite, // Psi_m^{+-}
  EntangledSame,     // Phi_m^{+-}
};

enum class Sign { Plus, Minus };

/// One helical term c * e^{i (a phi + b phi')} of a two-photon amplitude.
struct HelicalTerm {
  Complex coeff;
  int a;
  int b;
};

/// Behaviour of the wave-packet function under (r, r') -> (r-bar', r-bar).
enum class BarExchange { Symmetric, Antisymmetric, Neither };

struct TwoPhotonState {
  TwoPhotonState(StateFamily family, int m, BesselGaussEnvelope envelope, double delay_tau = 0.0,
                 Sign sign = Sign::Plus);

  StateFamily family;
  Sign sign;
  int m;
  BesselGaussEnvelope envelope;
  /// Delay of the path-B photon, seconds.
  double delay_tau;

  bool entangled() const {
    return family == StateFamily::EntangledOpposite || family == StateFamily::EntangledSame;
  }
  /// 1 for product families, 1/sqrt(2) for entangled ones.
  double normalization() const;
  /// Helical decomposition, normalisation factor included.
  std::vector<HelicalTerm> terms() const;
  BarExchange bar_exchange() const;
  /// "product_opposite", "product_same", "psi_plus", "psi_minus", "phi_plus", "phi_minus".
  std::string name() const;
};

/// Parses the names produced by TwoPhotonState::name(). Throws DomainError.
void parse_family(std::string_view name, StateFamily &family, Sign &sign);

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double rho() const { return std::hypot(x, y); }
  double phi() const { return std::atan2(y, x); }
  bool operator==(const Position &) const = default;
};

/// Wave vector in cylindrical components.
struct WaveVector {
  double kz = 0.0;
  double rho = 0.0;
  double phi = 0.0;
};

/// Spectral amplitude eta(k_z, rho_k); independent of phi_k.
double saf_envelope(const BesselGaussEnvelope &env, double k_z, double rho_k);

/// omega_k - omega_c = c (|k| - k_c), evaluated without cancellation.
double detuning(const BesselGaussEnvelope &env, double k_z, double rho_k);

/// Two-photon spectral amplitude xi(k, k'), including e^{-i omega_k' tau} on path B.
Complex two_photon_saf(const TwoPhotonState &state, const WaveVector &k, const WaveVector &k_prime);

/// Narrow-ring closed form of eta-tilde_m(rho, z, t). The helical factor
/// e^{i m phi} is not included.
Complex eta_tilde_closed(const TwistedMode &mode, double rho, double z, double t);

struct QuadratureValue {
  Complex value;
  /// |I(n) - I(n/2)| / |I(n)|.
  double relative_change = 0.0;
  bool converged = true;
};

/// eta-tilde_m(rho, z, t) by Gauss-Legendre quadrature of the Hankel/Fourier
/// integral over k_z in kz_c +- 6/sigma_z and rho_k in rho_k_c +- 6/sigma_rho.
/// `converged` is false when halving the resolution moves the result by
/// more than 1e-4 relative. Requires resolution >= 32.
QuadratureValue eta_tilde_quadrature(const TwistedMode &mode, double rho, double z, double t,
                                     int resolution);

struct RadialSample {
  double rho;
  double density;
};

/// Time-integrated transverse density F_m(rho) proportional to
/// J_m(rho k_c sin theta_c)^2, normalised to unit mass on the disk
/// rho <= window and zero outside it.
class TransverseProfile {
public:
  /// Throws WindowError if the window holds less than half of the main lobe.
  TransverseProfile(const TwistedMode &mode, double window);

  double density(double rho) const;
  /// Signed amplitude J_m(rho rho_k_c) / sqrt(Z); density = amplitude^2.
  double amplitude(double rho) const;

  int m() const { return m_; }
  double window() const { return window_; }
  double rho_k_c() const { return rho_k_c_; }
  /// Z = 2 pi int_0^window J_m^2 rho drho (closed form).
  double normalization() const { return norm_; }
  /// Window mass as a fraction of the main-lobe mass (>= 0.5 by construction).
  double main_lobe_fraction() const { return lobe_fraction_; }

  std::vector<RadialSample> sample(int n_samples) const;

private:
  int m_;
  double rho_k_c_;
  double window_;
  double norm_;
  double lobe_fraction_;
};

/// 2 pi int_0^R J_m(a rho)^2 rho drho.
double bessel_disk_mass(int m, double a, double radius);

/// k-th positive zero of J_m (k >= 1), |m| <= 60.
double bessel_zero(int m, int k);
inline double bessel_first_zero(int m) { return bessel_zero(m, 1); }

/// Samples F_m on n_samples >= 64 equally spaced radii in [0, rho_max].
std::vector<RadialSample> transverse_profile(const TwistedMode &mode, double rho_max,
                                             int n_samples);

/// (x, y, z) -> (x, -y, z).
Position reflect_position(const Position &r);

/// m -> -m.
TwistedMode reflect_mode(const TwistedMode &mode);

/// Wave-packet function xi-tilde(r, r', t) of `state`. When `mask` is set
/// its phase e^{i Phi(x, y)} multiplies the path-A argument.
Complex xi_tilde(const TwoPhotonState &state, const PhaseMask *mask, const Position &r,
                 const Position &r_prime, double t);

/// Coincidence amplitude xi-tilde(r, r') - xi-tilde(r-bar', r-bar).
Complex xi_cd(const TwoPhotonState &state, const PhaseMask *mask, const Position &r,
              const Position &r_prime, double t);

/// Coherence area pi R^2 / (k0^2 sigma^2) of a Gaussian SPDC pair.
double coherence_area(double distance, double k0, double sigma);

} // namespace vhom
