#include <vhom/core_math.hpp>
#include <vhom/errors.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>

namespace vhom {

namespace {

// Below this argument the ascending series is used; cancellation there costs
// at most e^2 in relative accuracy.
constexpr double kSeriesLimit = 2.0;

double bessel_series(int m, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= m; ++k)
    term *= half / k;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum))
      break;
  }
  return sum;
}

double bessel_miller(int m, double x) {
  const double top = std::max(static_cast<double>(m), x);
  int start = static_cast<int>(top + 30.0 + 4.0 * std::sqrt(top));
  start += start % 2;

  constexpr double kBig = 1e200;
  double j_next = 0.0;
  double j_cur = 1e-30;
  double result = 0.0;
  double norm = 2.0 * j_cur; // start is even
  const double two_over_x = 2.0 / x;
  for (int k = start; k >= 1; --k) {
    const double j_prev = k * two_over_x * j_cur - j_next;
    j_next = j_cur;
    j_cur = j_prev;
    const int order = k - 1;
    if (order == m)
      result = j_cur;
    if (order == 0)
      norm += j_cur;
    else if (order % 2 == 0)
      norm += 2.0 * j_cur;
    if (std::abs(j_cur) > kBig) {
      j_cur /= kBig;
      j_next /= kBig;
      norm /= kBig;
      result /= kBig;
    }
  }
  return result / norm;
}

} // namespace

double bessel_j(int m, double x) {
  if (std::abs(m) > kMaxBesselOrder) {
    std::ostringstream os;
    os << "bessel_j: order " << m << " outside [-" << kMaxBesselOrder << ", " << kMaxBesselOrder
       << "]";
    throw DomainError(os.str());
  }
  if (!std::isfinite(x) || std::abs(x) > kMaxBesselArgument) {
    std::ostringstream os;
    os << "bessel_j: argument " << x << " not finite or beyond " << kMaxBesselArgument;
    throw DomainError(os.str());
  }
  const int order = std::abs(m);
  const double ax = std::abs(x);
  double value;
  if (ax == 0.0)
    value = order == 0 ? 1.0 : 0.0;
  else if (ax < kSeriesLimit)
    value = bessel_series(order, ax);
  else
    value = bessel_miller(order, ax);

  const bool odd = order % 2 == 1;
  // Order and argument reflections each contribute (-1)^m.
  int flips = 0;
  if (m < 0 && odd)
    ++flips;
  if (x < 0 && odd)
    ++flips;
  return flips % 2 ? -value : value;
}

Complex i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
  case 0:
    return {1.0, 0.0};
  case 1:
    return {0.0, 1.0};
  case 2:
    return {-1.0, 0.0};
  default:
    return {0.0, -1.0};
  }
}

void QuadratureRule::map_to(double a, double b, std::vector<double> &x,
                            std::vector<double> &w) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  x.resize(nodes.size());
  w.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    x[i] = mid + half * nodes[i];
    w[i] = half * weights[i];
  }
}

QuadratureRule gauss_legendre(int order) {
  if (order < 2 || order > 2048)
    throw DomainError("gauss_legendre: order " + std::to_string(order) + " outside [2, 2048]");

  QuadratureRule rule;
  rule.order = order;
  rule.nodes.assign(order, 0.0);
  rule.weights.assign(order, 0.0);
  const int n = order;
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16)
        break;
    }
    if (n % 2 == 1 && i == half - 1)
      z = 0.0;
    // Recompute the derivative at the converged node.
    {
      double p0 = 1.0;
      double p1 = z;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const QuadratureRule &cached_gauss_legendre(int order) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto &slot = cache[order];
  if (!slot)
    slot = std::make_unique<QuadratureRule>(gauss_legendre(order));
  return *slot;
}

double azimuthal_node(int j, int n, AzimuthalGrid grid) {
  const double offset = grid == AzimuthalGrid::Symmetric ? 0.5 : 0.25;
  return kTwoPi * (j + offset) / n;
}

Complex integrate_2d_polar(const PolarIntegrand &f, double rho_max, int n_rho, int n_phi,
                           AzimuthalGrid grid) {
  if (!(rho_max > 0.0) || !std::isfinite(rho_max))
    throw DomainError("integrate_2d_polar: rho_max must be positive and finite");
  if (n_rho < 4 || n_phi < 4 || n_phi % 2 != 0)
    throw DomainError("integrate_2d_polar: need n_rho >= 4 and even n_phi >= 4");

  std::vector<double> rho, w;
  cached_gauss_legendre(n_rho).map_to(0.0, rho_max, rho, w);
  const double dphi = kTwoPi / n_phi;

  Complex total{0.0, 0.0};
  for (int i = 0; i < n_rho; ++i) {
    Complex ring{0.0, 0.0};
    for (int j = 0; j < n_phi; ++j) {
      const double phi = azimuthal_node(j, n_phi, grid);
      const Complex v = f(rho[i], phi);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "integrate_2d_polar: non-finite sample at node (i=" << i << ", j=" << j
           << ", rho=" << rho[i] << ", phi=" << phi << ")";
        throw EvaluationError(os.str());
      }
      ring += v;
    }
    total += ring * (rho[i] * w[i] * dphi);
  }
  return total;
}

} // namespace vhom
