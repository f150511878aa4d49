#pragma once
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace vhom {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Largest |m| accepted by bessel_j.
inline constexpr int kMaxBesselOrder = 60;
/// Largest |x| accepted by bessel_j.
inline constexpr double kMaxBesselArgument = 1e4;

/// Bessel function of the first kind J_m(x) for integer order.
///
/// Ascending power series for small |x|, Miller's downward recurrence
/// normalised by J_0 + 2 sum J_2k = 1 otherwise. Negative orders and
/// arguments use J_{-m}(x) = (-1)^m J_m(x) and J_m(-x) = (-1)^m J_m(x), so
/// both parity identities hold bit-exactly.
///
/// Throws DomainError for |m| > 60, |x| > 1e4 or non-finite x.
double bessel_j(int m, double x);

/// i^n for integer n, exact.
Complex i_pow(int n);

/// Gauss-Legendre rule on [-1, 1]. Nodes ascending, weights positive.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order = 0;

  /// Rule mapped to [a, b]: returns (node, weight) pairs via out-params.
  void map_to(double a, double b, std::vector<double> &x, std::vector<double> &w) const;
};

/// Newton iteration on the Legendre three-term recurrence.
/// Throws DomainError unless 2 <= order <= 2048.
QuadratureRule gauss_legendre(int order);

/// Shared, lazily built rule for `order`. Thread-safe.
const QuadratureRule &cached_gauss_legendre(int order);

/// Azimuthal node placement for polar integration.
///
/// Symmetric places nodes at 2*pi*(j + 1/2)/n, a set that maps onto itself
/// under phi -> -phi. Asymmetric shifts them by a quarter step so it does not.
enum class AzimuthalGrid { Symmetric, Asymmetric };

/// Azimuthal node j of an n-point grid.
double azimuthal_node(int j, int n, AzimuthalGrid grid);

/// Index of the node at -phi_j on a symmetric grid.
inline int mirrored_azimuthal_index(int j, int n) { return n - 1 - j; }

using PolarIntegrand = std::function<Complex(double rho, double phi)>;

/// Integral over the disk rho <= rho_max of f(rho, phi) rho drho dphi.
///
/// Gauss-Legendre in rho, uniform rule in phi. Requires rho_max > 0,
/// n_rho >= 4 and an even n_phi >= 4. A non-finite sample raises
/// EvaluationError naming the node.
Complex integrate_2d_polar(const PolarIntegrand &f, double rho_max, int n_rho, int n_phi,
                           AzimuthalGrid grid = AzimuthalGrid::Symmetric);

} // namespace vhom
