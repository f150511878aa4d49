#include <vhom/config.hpp>
#include <vhom/errors.hpp>
#include <vhom/hom_engine.hpp>
#include <vhom/imaging.hpp>
#include <vhom/pgm.hpp>
#include <vhom/selftest.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

namespace vhom {

namespace {

std::string fmt(const char *f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct Check {
  const char *name;
  std::function<SelftestRow()> run;
};

SelftestRow row(const char *name, bool ok, std::string detail) {
  return {name, ok, std::move(detail)};
}

double max_abs_diff(const ScalarImage &a, const ScalarImage &b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k)
    d = std::max(d, std::abs(a.values[k] - b.values[k]));
  return d;
}

std::vector<Check> checks() {
  const auto env = BesselGaussEnvelope::reference();
  SensorGrid small;
  small.nx = small.ny = 20;
  small.subsamples = 2;
  const double window = default_window(SensorGrid{});

  return {
      {"bessel parity",
       [] {
         const double a = bessel_j(-3, 2.7), b = bessel_j(3, 2.7);
         return row("bessel parity", a == -b, "J_-3(2.7) = -J_3(2.7)");
       }},
      {"bessel recurrence",
       [] {
         double worst = 0.0;
         for (int m = 1; m <= 20; ++m)
           for (double x = 1.0; x <= 50.0; x += 3.5)
             worst = std::max(worst, std::abs(bessel_j(m - 1, x) + bessel_j(m + 1, x) -
                                              2.0 * m / x * bessel_j(m, x)));
         return row("bessel recurrence", worst < 1e-9, "max residual " + fmt("%.2e", worst));
       }},
      {"gauss-legendre exactness",
       [] {
         const auto r = gauss_legendre(5);
         double s = 0.0, ws = 0.0;
         for (int i = 0; i < 5; ++i) {
           s += r.weights[i] * std::pow(r.nodes[i], 8);
           ws += r.weights[i];
         }
         const double err = std::max(std::abs(s - 2.0 / 9.0), std::abs(ws - 2.0));
         return row("gauss-legendre exactness", err < 1e-13, "x^8 error " + fmt("%.2e", err));
       }},
      {"polar disk area",
       [] {
         const auto v = integrate_2d_polar([](double, double) { return Complex(1.0, 0.0); }, 2.0,
                                           16, 16);
         const double err = std::abs(v - 4.0 * kPi);
         return row("polar disk area", err < 1e-10, "error " + fmt("%.2e", err));
       }},
      {"hom analytic vs numeric",
       [env] {
         double worst = 0.0, cons = 0.0;
         for (int m = 0; m <= 3; ++m)
           for (auto fam : {StateFamily::ProductOpposite, StateFamily::ProductSame,
                            StateFamily::EntangledOpposite, StateFamily::EntangledSame})
             for (auto s : {Sign::Plus, Sign::Minus}) {
               const TwoPhotonState st(fam, m, env, 0.0, s);
               if (m == 0 && st.entangled() && s == Sign::Minus)
                 continue;
               const auto a = hom_probabilities_analytic(st);
               const auto n = hom_probabilities_numeric(st, {32, 16});
               worst = std::max({worst, std::abs(a.p_cc - n.p_cc), std::abs(a.p_dd - n.p_dd),
                                 std::abs(a.p_cd - n.p_cd)});
               cons = std::max({cons, std::abs(a.total() - 1.0), std::abs(n.total() - 1.0)});
             }
         return row("hom analytic vs numeric", worst < 1e-3 && cons < 1e-9,
                    "max diff " + fmt("%.2e", worst) + ", conservation " + fmt("%.2e", cons));
       }},
      {"hom dip",
       [env] {
         const TwoPhotonState st(StateFamily::ProductOpposite, 1, env);
         const auto scan = hom_dip_scan(st, dip_scan_delays(env, 10.0, 9), {64, 16});
         const auto &p = scan.p_cd_values;
         double asym = 0.0;
         for (std::size_t i = 0; i < p.size(); ++i)
           asym = std::max(asym, std::abs(p[i] - p[p.size() - 1 - i]));
         const bool ok = p[4] < 1e-3 && std::abs(p[0] - 0.5) < 1e-2 && asym < 1e-6;
         return row("hom dip", ok,
                    "p_cd(0) " + fmt("%.2e", p[4]) + ", p_cd(10) " + fmt("%.6f", p[0]));
       }},
      {"bar exchange",
       [env] {
         const TwoPhotonState psi(StateFamily::EntangledOpposite, 2, env);
         const TwoPhotonState phi(StateFamily::EntangledSame, 2, env, 0.0, Sign::Minus);
         const Position r{30e-6, 20e-6, 0.0}, rp{-10e-6, 45e-6, 0.0};
         const double z = std::abs(xi_cd(psi, nullptr, r, rp, 0.0));
         const Complex peak = xi_cd(phi, nullptr, r, rp, 0.0) - 2.0 * xi_tilde(phi, nullptr, r, rp, 0.0);
         const bool ok = psi.bar_exchange() == BarExchange::Symmetric &&
                         phi.bar_exchange() == BarExchange::Antisymmetric && z < 1e-12 &&
                         std::abs(peak) < 1e-9 * std::abs(xi_tilde(phi, nullptr, r, rp, 0.0));
         return row("bar exchange", ok, "|xi_cd(psi+)| " + fmt("%.1e", z));
       }},
      {"overlap theorem",
       [env, window] {
         const auto o = overlap_integrals(TwistedMode(env, 1), PhaseMask::sector(0.25, kPi, 0.3),
                                          window);
         const double d = std::abs(o.i1 - o.i2);
         return row("overlap theorem", d < 1e-9, "|I1 - I2| " + fmt("%.1e", d));
       }},
      {"sector overlap value",
       [env, window] {
         const auto o = overlap_integrals(TwistedMode(env, 1), PhaseMask::sector(0.25, kPi),
                                          window);
         const double d = std::abs(o.i2 - Complex(0.5, 0.0));
         return row("sector overlap value", d < 1e-6, "|I2 - 0.5| " + fmt("%.1e", d));
       }},
      {"texture invisibility",
       [env, window, small] {
         const ImagingScene masked(TwistedMode(env, 1), PhaseMask::checkerboard(60e-6, kPi, 30e-6, 30e-6), window);
         const ImagingScene plain(TwistedMode(env, 1), PhaseMask::uniform(0.0), window);
         const auto a = density_port_d(masked, small);
         const auto b = density_port_d(plain, small);
         const double d = max_abs_diff(a, b) / b.max_value();
         return row("texture invisibility", d < 1e-6, "max rel deviation " + fmt("%.1e", d));
       }},
      {"mirror image",
       [env, window, small] {
         const ImagingScene s(TwistedMode(env, 2), PhaseMask::sector(0.25, kPi, 0.2), window);
         const auto cd = coincidence_port_d(s, small);
         const auto cc = coincidence_port_c(s, small);
         double d = 0.0;
         for (int iy = 0; iy < small.ny; ++iy)
           for (int ix = 0; ix < small.nx; ++ix)
             d = std::max(d, std::abs(cc.at(ix, iy) - cd.at(ix, small.ny - 1 - iy)));
         d /= cd.max_value();
         return row("mirror image", d < 1e-9, "max rel deviation " + fmt("%.1e", d));
       }},
      {"serial vs parallel",
       [env, window, small] {
         const ImagingScene s(TwistedMode(env, 1), PhaseMask::sector(0.25, kPi), window);
         const auto a = coincidence_port_d(s, small, Execution::Serial);
         const auto b = coincidence_port_d(s, small, Execution::Parallel);
         return row("serial vs parallel", a.values == b.values, "bit-identical render");
       }},
      {"snr formulas",
       [] {
         const bool ok = snr_two_photon(0.5, 1) == 1.0 && snr_coherent(100.0) == 10.0 &&
                         snr_two_photon(0.0, 10) == 0.0;
         return row("snr formulas", ok, "SNR_TPS(0.5, 1) = 1, SNR_CS(100) = 10");
       }},
      {"config defaults",
       [] {
         const auto c = parse_config("{}");
         bool ok = c.sensor.nx == 50 && c.sensor.ny == 50 && c.envelope.wavelength == 500e-9;
         try {
           parse_config(R"({"envelope":{"theta_c":-0.1}})");
           ok = false;
         } catch (const ConfigError &e) {
           ok = ok && e.path == "envelope.theta_c";
         }
         return row("config defaults", ok, "defaults and strict validation");
       }},
      {"pgm round trip",
       [] {
         std::vector<std::uint8_t> levels(7 * 5);
         for (std::size_t i = 0; i < levels.size(); ++i)
           levels[i] = static_cast<std::uint8_t>((i * 37 + 11) % 256);
         const auto m = PhaseMask::from_levels(7, 5, levels, 1e-5, 0.0, 0.0, kPi);
         const auto bytes = write_mask_pgm(m);
         const auto back = read_mask_pgm(bytes, 1e-5, 0.0, 0.0, kPi);
         const bool ok = write_mask_pgm(back) == bytes && back.raster_data()->levels == levels;
         return row("pgm round trip", ok, "mask -> P5 -> mask");
       }},
  };
}

} // namespace

std::vector<SelftestRow> run_selftest() {
  std::vector<SelftestRow> rows;
  for (const auto &c : checks()) {
    try {
      rows.push_back(c.run());
    } catch (const std::exception &e) {
      rows.push_back({c.name, false, std::string("exception: ") + e.what()});
    }
  }
  return rows;
}

std::string format_selftest(const std::vector<SelftestRow> &rows) {
  std::string out;
  int failed = 0;
  char buf[256];
  for (const auto &r : rows) {
    std::snprintf(buf, sizeof buf, "%-4s  %-26s  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                  r.detail.c_str());
    out += buf;
    failed += !r.passed;
  }
  std::snprintf(buf, sizeof buf, "%zu checks, %d failed\n", rows.size(), failed);
  out += buf;
  return out;
}

} // namespace vhom
