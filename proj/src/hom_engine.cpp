#include <vhom/errors.hpp>
#include <vhom/hom_engine.hpp>

#include <algorithm>
#include <cmath>

namespace vhom {

namespace {

constexpr double kFlagThreshold = 1e-2;

bool vanishing(const TwoPhotonState &state) {
  return state.m == 0 && state.entangled() && state.sign == Sign::Minus;
}

void require_nonvanishing(const TwoPhotonState &state) {
  if (vanishing(state))
    throw DomainError(state.name() + " with m = 0 is the zero state");
}

HomProbabilities from_overlaps(Complex cc, Complex dd, Complex cd, double norm) {
  HomProbabilities p;
  p.p_cc = 0.25 + 0.25 * cc.real() / norm;
  p.p_dd = 0.25 + 0.25 * dd.real() / norm;
  p.p_cd = 0.5 - 0.5 * cd.real() / norm;
  return p;
}

double max_difference(const HomProbabilities &a, const HomProbabilities &b) {
  return std::max({std::abs(a.p_cc - b.p_cc), std::abs(a.p_dd - b.p_dd),
                   std::abs(a.p_cd - b.p_cd)});
}

void finish(HomProbabilities &fine, const HomProbabilities &coarse) {
  fine.quadrature_error = max_difference(fine, coarse);
  fine.flagged = !(fine.quadrature_error <= kFlagThreshold);
}

// Spectral window shared by every k-space integral.
struct KAxis {
  std::vector<double> x, w;
};

KAxis kz_axis(const BesselGaussEnvelope &env, int n) {
  KAxis ax;
  const double half = 6.0 / env.sigma_z();
  cached_gauss_legendre(n).map_to(env.kz_c() - half, env.kz_c() + half, ax.x, ax.w);
  return ax;
}

KAxis rho_axis(const BesselGaussEnvelope &env, int n) {
  KAxis ax;
  const double half = 6.0 / env.sigma_rho();
  cached_gauss_legendre(n).map_to(std::max(0.0, env.rho_k_c() - half), env.rho_k_c() + half,
                                  ax.x, ax.w);
  return ax;
}

// g(tau) = int dk_z rho drho |eta|^2 e^{-i (omega - omega_c) tau}.
Complex spectral_overlap(const BesselGaussEnvelope &env, double tau, int n_kz, int n_rho) {
  const auto z = kz_axis(env, n_kz);
  const auto r = rho_axis(env, n_rho);
  Complex total{0.0, 0.0};
  for (int j = 0; j < n_rho; ++j) {
    Complex row{0.0, 0.0};
    for (int i = 0; i < n_kz; ++i) {
      const double eta = saf_envelope(env, z.x[i], r.x[j]);
      const double weight = z.w[i] * eta * eta;
      row += tau == 0.0 ? Complex(weight, 0.0)
                        : weight * std::polar(1.0, -detuning(env, z.x[i], r.x[j]) * tau);
    }
    total += r.w[j] * r.x[j] * row;
  }
  return total;
}

HomProbabilities reduced_probabilities(const TwoPhotonState &state, int n_kz, int n_rho) {
  const auto terms = state.terms();
  Complex exchange{0.0, 0.0};
  Complex norm{0.0, 0.0};
  for (const auto &ti : terms)
    for (const auto &tj : terms) {
      const Complex c = std::conj(ti.coeff) * tj.coeff;
      if (ti.a + tj.b == 0 && ti.b + tj.a == 0)
        exchange += c;
      if (ti.a == tj.a && ti.b == tj.b)
        norm += c;
    }
  // The common factor (2 pi)^2 cancels in the ratio.
  const Complex g = spectral_overlap(state.envelope, state.delay_tau, n_kz, n_rho);
  const double g0 = spectral_overlap(state.envelope, 0.0, n_kz, n_rho).real();
  const Complex x = std::norm(g) * exchange;
  return from_overlaps(x, x, x, g0 * g0 * norm.real());
}

HomProbabilities full3d_probabilities(const TwoPhotonState &state, int n_kz, int n_rho,
                                      int n_phi) {
  const auto &env = state.envelope;
  const auto z = kz_axis(env, n_kz);
  const auto r = rho_axis(env, n_rho);
  const auto terms = state.terms();
  const std::size_t nt = terms.size();
  const std::size_t n = static_cast<std::size_t>(n_kz) * n_rho * n_phi;

  std::vector<double> eta(n), w(n);
  std::vector<Complex> delay(n);
  std::vector<int> mirror(n);
  std::vector<std::vector<Complex>> ea(nt, std::vector<Complex>(n)),
      eb(nt, std::vector<Complex>(n));
  const double dphi = kTwoPi / n_phi;
  std::size_t p = 0;
  for (int i = 0; i < n_kz; ++i)
    for (int j = 0; j < n_rho; ++j)
      for (int l = 0; l < n_phi; ++l, ++p) {
        const double phi = dphi * l;
        eta[p] = saf_envelope(env, z.x[i], r.x[j]);
        w[p] = z.w[i] * r.w[j] * r.x[j] * dphi;
        delay[p] = std::polar(1.0, -detuning(env, z.x[i], r.x[j]) * state.delay_tau);
        mirror[p] = static_cast<int>(p - l + (n_phi - l) % n_phi);
        for (std::size_t t = 0; t < nt; ++t) {
          ea[t][p] = std::polar(1.0, terms[t].a * phi);
          eb[t][p] = std::polar(1.0, terms[t].b * phi);
        }
      }

  auto xi = [&](std::size_t u, std::size_t v) {
    Complex h{0.0, 0.0};
    for (std::size_t t = 0; t < nt; ++t)
      h += terms[t].coeff * ea[t][u] * eb[t][v];
    return eta[u] * eta[v] * delay[v] * h;
  };

  // Row partial sums, added in index order afterwards.
  std::vector<Complex> rcc(n), rdd(n), rcd(n);
  std::vector<double> rn(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long ia = 0; ia < count; ++ia) {
    const auto a = static_cast<std::size_t>(ia);
    const std::size_t ab = mirror[a];
    Complex scc{0.0, 0.0}, sdd{0.0, 0.0}, scd{0.0, 0.0};
    double sn = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t bb = mirror[b];
      const Complex x = xi(a, b);
      scc += w[b] * std::conj(xi(ab, b)) * xi(bb, a);
      sdd += w[b] * std::conj(xi(a, bb)) * xi(b, ab);
      scd += w[b] * std::conj(x) * xi(bb, ab);
      sn += w[b] * std::norm(x);
    }
    rcc[a] = w[a] * scc;
    rdd[a] = w[a] * sdd;
    rcd[a] = w[a] * scd;
    rn[a] = w[a] * sn;
  }
  Complex cc{0.0, 0.0}, dd{0.0, 0.0}, cd{0.0, 0.0};
  double norm = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    cc += rcc[a];
    dd += rdd[a];
    cd += rcd[a];
    norm += rn[a];
  }
  if (!(norm > 0.0))
    throw DomainError(state.name() + ": state has zero norm");
  return from_overlaps(cc, dd, cd, norm);
}

} // namespace

HomProbabilities hom_probabilities_analytic(const TwoPhotonState &state) {
  if (state.delay_tau != 0.0)
    throw UnsupportedError("closed-form probabilities exist only at zero delay; use the "
                           "numeric engine for tau != 0");
  require_nonvanishing(state);
  HomProbabilities p;
  p.method = "analytic";
  auto set = [&p](double cc, double dd, double cd) {
    p.p_cc = cc;
    p.p_dd = dd;
    p.p_cd = cd;
  };
  switch (state.family) {
  case StateFamily::ProductOpposite:
  case StateFamily::EntangledOpposite:
    set(0.5, 0.5, 0.0);
    break;
  case StateFamily::ProductSame:
    if (state.m == 0)
      set(0.5, 0.5, 0.0);
    else
      set(0.25, 0.25, 0.5);
    break;
  case StateFamily::EntangledSame:
    if (state.sign == Sign::Plus)
      set(0.5, 0.5, 0.0);
    else
      set(0.0, 0.0, 1.0);
    break;
  }
  return p;
}

HomProbabilities hom_probabilities_numeric(const TwoPhotonState &state, KGrid grid) {
  if (grid.n_kz < 16 || grid.n_rho < 16 || grid.n_kz > 2048 || grid.n_rho > 2048)
    throw DomainError("numeric engine: grid resolutions must lie in [16, 2048]");
  require_nonvanishing(state);
  auto fine = reduced_probabilities(state, grid.n_kz, grid.n_rho);
  const auto coarse = reduced_probabilities(state, grid.n_kz / 2, grid.n_rho / 2);
  fine.method = "numeric";
  finish(fine, coarse);
  return fine;
}

HomProbabilities hom_probabilities_full3d(const TwoPhotonState &state, Full3dGrid grid) {
  if (grid.n_kz < 4 || grid.n_rho < 4 || grid.n_kz > 64 || grid.n_rho > 64)
    throw DomainError("3-D engine: n_kz and n_rho must lie in [4, 64]");
  int reach = 0;
  for (const auto &t : state.terms())
    reach = std::max({reach, std::abs(t.a), std::abs(t.b)});
  if (grid.n_phi <= 4 * reach || grid.n_phi > 64)
    throw DomainError("3-D engine: n_phi must exceed 4 |m| and not exceed 64");
  require_nonvanishing(state);
  auto fine = full3d_probabilities(state, grid.n_kz, grid.n_rho, grid.n_phi);
  const auto coarse = full3d_probabilities(state, grid.n_kz / 2, grid.n_rho / 2, grid.n_phi);
  fine.method = "numeric-3d";
  finish(fine, coarse);
  return fine;
}

DipScan hom_dip_scan(const TwoPhotonState &state, const std::vector<double> &tau_values,
                     KGrid grid) {
  DipScan scan;
  scan.state = state.name() + "(m=" + std::to_string(state.m) + ")";
  for (double tau : tau_values) {
    if (!std::isfinite(tau))
      throw DomainError("dip scan: delays must be finite");
    TwoPhotonState delayed(state.family, state.m, state.envelope, tau, state.sign);
    const auto p = hom_probabilities_numeric(delayed, grid);
    scan.delays.push_back(tau);
    scan.p_cd_values.push_back(p.p_cd);
    scan.flagged = scan.flagged || p.flagged;
    scan.max_quadrature_error = std::max(scan.max_quadrature_error, p.quadrature_error);
  }
  return scan;
}

std::vector<double> dip_scan_delays(const BesselGaussEnvelope &env, double span, int points) {
  if (points < 1 || !(span >= 0.0) || !std::isfinite(span))
    throw DomainError("dip scan: need points >= 1 and a finite span >= 0");
  const double unit = env.sigma_z() / kSpeedOfLight;
  std::vector<double> out(points, 0.0);
  if (points == 1)
    return out;
  for (int i = 0; i < points; ++i)
    out[i] = (-span + 2.0 * span * i / (points - 1)) * unit;
  // Keep the grid exactly antisymmetric.
  for (int i = 0; i < points / 2; ++i)
    out[points - 1 - i] = -out[i];
  if (points % 2 == 1)
    out[points / 2] = 0.0;
  return out;
}

namespace {

HomProbabilities masked_at(const TransverseProfile &profile, const PhaseMask &mask, int n_rho,
                           int n_phi, Execution exec) {
  std::vector<double> rho, wr;
  cached_gauss_legendre(n_rho).map_to(0.0, profile.window(), rho, wr);
  const std::size_t n = static_cast<std::size_t>(n_rho) * n_phi;
  std::vector<Complex> a(n), b(n);
  std::vector<double> w(n);
  std::vector<int> mirror(n);
  const int m = profile.m();
  const double dphi = kTwoPi / n_phi;
  for (int i = 0; i < n_rho; ++i) {
    const double u = profile.amplitude(rho[i]);
    for (int j = 0; j < n_phi; ++j) {
      const std::size_t p = static_cast<std::size_t>(i) * n_phi + j;
      const double phi = azimuthal_node(j, n_phi, AzimuthalGrid::Symmetric);
      a[p] = u * std::polar(1.0, m * phi + mask.phase_polar(rho[i], phi));
      b[p] = u * std::polar(1.0, -m * phi);
      w[p] = wr[i] * rho[i] * dphi;
      mirror[p] = i * n_phi + mirrored_azimuthal_index(j, n_phi);
    }
  }
  const auto s = pair_sums(a, b, w, mirror, exec);
  return from_overlaps(s.cc, s.dd, s.cd, s.norm);
}

} // namespace

HomProbabilities hom_probabilities_masked(const TransverseProfile &profile, const PhaseMask &mask,
                                          int n_rho, int n_phi, Execution exec) {
  if (n_rho < 8 || n_rho > 2048)
    throw DomainError("masked engine: n_rho must lie in [8, 2048]");
  if (n_phi < 8 || n_phi % 4 != 0)
    throw DomainError("masked engine: n_phi must be a multiple of 4, at least 8");
  auto fine = masked_at(profile, mask, n_rho, n_phi, exec);
  const auto coarse = masked_at(profile, mask, n_rho / 2, n_phi / 2, exec);
  fine.method = "numeric-real-space";
  finish(fine, coarse);
  return fine;
}

} // namespace vhom
