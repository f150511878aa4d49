#pragma once
#include <vhom/kernels.hpp>
#include <vhom/phase_mask.hpp>
#include <vhom/photon_states.hpp>

#include <string>
#include <vector>

namespace vhom {

/// Output-port probabilities of a two-photon state at a 50:50 splitter.
struct HomProbabilities {
  double p_cc = 0.0;
  double p_dd = 0.0;
  double p_cd = 0.0;
  /// "analytic", "numeric", "numeric-3d" or "numeric-real-space".
  std::string method;
  /// 0 for analytic results; |result(n) - result(n/2)| otherwise.
  double quadrature_error = 0.0;
  /// Set when quadrature_error exceeds 1e-2.
  bool flagged = false;

  double total() const { return p_cc + p_dd + p_cd; }
};

/// Closed-form zero-delay values for each family.
/// Throws UnsupportedError for a nonzero delay and DomainError for the
/// vanishing states psi_minus / phi_minus at m = 0.
HomProbabilities hom_probabilities_analytic(const TwoPhotonState &state);

/// Resolution of the (k_z, rho_k) Gauss-Legendre grid.
struct KGrid {
  int n_kz = 96;
  int n_rho = 48;
};

/// Numeric evaluation of the general 50:50 splitter integrals. The azimuthal
/// integrals of the helical terms are done exactly (Kronecker deltas between
/// OAM indices); the (k_z, rho_k) integral, with the path-B delay factor
/// e^{-i omega tau}, by quadrature. Requires n_kz, n_rho >= 16.
HomProbabilities hom_probabilities_numeric(const TwoPhotonState &state, KGrid grid = {});

/// Cross-check without the azimuthal reduction: both photons sampled on a
/// full (k_z, rho_k, phi_k) grid and the integrals summed pair by pair.
struct Full3dGrid {
  int n_kz = 32;
  int n_rho = 6;
  /// Uniform nodes 2 pi j / n_phi; must exceed 4 |m|.
  int n_phi = 16;
};
HomProbabilities hom_probabilities_full3d(const TwoPhotonState &state, Full3dGrid grid = {});

struct DipScan {
  std::vector<double> delays;
  std::vector<double> p_cd_values;
  std::string state;
  bool flagged = false;
  double max_quadrature_error = 0.0;
};

/// p_cd(tau) for each delay, via hom_probabilities_numeric.
DipScan hom_dip_scan(const TwoPhotonState &state, const std::vector<double> &tau_values,
                     KGrid grid = {});

/// `points` delays evenly spaced over [-span, span] sigma_z / c.
std::vector<double> dip_scan_delays(const BesselGaussEnvelope &env, double span, int points);

/// Probabilities of the masked product state used for imaging, from the
/// real-space wave-packet function
///   xi(r, r') = u(r) e^{i m phi} e^{i Phi(r)} u(r') e^{-i m phi'}
/// with u the normalised transverse amplitude of `profile`. Sums over all
/// node pairs of an (n_rho x n_phi) polar grid with a symmetric azimuthal
/// grid, so reflected nodes stay on the grid.
HomProbabilities hom_probabilities_masked(const TransverseProfile &profile, const PhaseMask &mask,
                                          int n_rho, int n_phi,
                                          Execution exec = Execution::Parallel);

} // namespace vhom
