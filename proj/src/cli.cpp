#include <vhom/cli.hpp>
#include <vhom/config.hpp>
#include <vhom/errors.hpp>
#include <vhom/image_io.hpp>
#include <vhom/pgm.hpp>
#include <vhom/selftest.hpp>

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace vhom {

namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct Overrides {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::string family;
  int m = 0;
  double tau = 0.0;
  std::string mask_kind;
  std::string mask_file;
  double fraction = 0.0;
  double window = 0.0;
  long long n_tps = 0;
  double n_cs = 0.0;
  std::vector<CLI::Option *> threads_opt;
  std::vector<CLI::Option *> family_opt;
  std::vector<CLI::Option *> m_opt;
  std::vector<CLI::Option *> tau_opt;
  std::vector<CLI::Option *> fraction_opt;
  std::vector<CLI::Option *> window_opt;
  std::vector<CLI::Option *> n_tps_opt;
  std::vector<CLI::Option *> n_cs_opt;
};

bool given(const std::vector<CLI::Option *> &opts) {
  for (const auto *opt : opts)
    if (opt->count() > 0)
      return true;
  return false;
}

SimulationConfig load_config(const Overrides &o) {
  SimulationConfig c = o.config_path.empty() ? parse_config("{}")
                                             : parse_config(read_file(o.config_path));
  if (!o.out_dir.empty())
    c.output.dir = o.out_dir;
  if (given(o.threads_opt))
    c.threads = o.threads;
  if (given(o.family_opt))
    c.state.family = o.family;
  if (given(o.m_opt))
    c.state.m = o.m;
  if (given(o.tau_opt))
    c.state.tau = o.tau;
  if (!o.mask_kind.empty())
    c.mask.kind = o.mask_kind;
  if (!o.mask_file.empty()) {
    c.mask.kind = "file";
    c.mask.file = o.mask_file;
  }
  if (given(o.fraction_opt))
    c.mask.fraction = o.fraction;
  if (given(o.window_opt))
    c.quadrature.window = o.window;
  if (given(o.n_tps_opt))
    c.snr.n_tps = o.n_tps;
  if (given(o.n_cs_opt))
    c.snr.n_cs = o.n_cs;
  // Round-trip through the parser so overrides get the same validation.
  c = parse_config(config_to_json(c));
  if (c.threads > 0)
    omp_set_num_threads(c.threads);
  return c;
}

fs::path prepare_output(const SimulationConfig &c) {
  const fs::path dir = c.output.dir;
  fs::create_directories(dir);
  write_file(dir / "effective_config.json", config_to_json(c));
  write_file(dir / "version.txt", std::string(kVersion) + "\n");
  return dir;
}

void emit(const ScalarImage &img, const fs::path &dir, const char *name, const SimulationConfig &c) {
  if (c.output.csv)
    write_image(img, dir / name, ImageFormat::Csv);
  if (c.output.pgm)
    write_image(img, dir / name, ImageFormat::Pgm);
}

ImagingScene make_scene(const SimulationConfig &c) {
  if (c.state.family != "product_opposite")
    throw ConfigError("state.family", "imaging renders the product_opposite state only");
  return {TwistedMode(make_envelope(c), c.state.m), make_mask(c), effective_window(c),
          make_resolution(c)};
}

void tag_floor(ScalarImage &img, double floor) { img.metadata["floor"] = num(floor); }

std::string probability_row(const HomProbabilities &p) {
  return num(p.p_cc) + "," + num(p.p_dd) + "," + num(p.p_cd) + "," + p.method + "," +
         num(p.quadrature_error) + "\n";
}

int run_probabilities(const SimulationConfig &c, bool full3d, std::ostream &out,
                      std::ostream &err) {
  const auto state = make_state(c);
  std::string csv = "p_cc,p_dd,p_cd,method,quadrature_error\n";
  if (state.delay_tau == 0.0)
    csv += probability_row(hom_probabilities_analytic(state));
  const auto numeric = hom_probabilities_numeric(state, c.hom);
  csv += probability_row(numeric);
  if (full3d)
    csv += probability_row(hom_probabilities_full3d(state));
  out << csv;
  if (numeric.flagged)
    err << "vhom: warning: numeric result did not converge (error " << numeric.quadrature_error
        << ")\n";
  return kExitOk;
}

int run_dip_scan(const SimulationConfig &c, double span, int points, std::ostream &out,
                 std::ostream &err) {
  const auto state = make_state(c);
  const auto delays = dip_scan_delays(state.envelope, span, points);
  err << "vhom: dip scan of " << state.name() << " over " << points << " delays\n";
  const auto scan = hom_dip_scan(state, delays, c.hom);
  const double unit = state.envelope.sigma_z() / kSpeedOfLight;
  std::string csv = "tau_s,tau_sigma_z_over_c,p_cd\n";
  for (std::size_t i = 0; i < scan.delays.size(); ++i)
    csv += num(scan.delays[i]) + "," + num(scan.delays[i] / unit) + "," +
           num(scan.p_cd_values[i]) + "\n";
  out << csv;

  const auto dir = prepare_output(c);
  write_file(dir / "dip_scan.csv", csv);
  std::string meta;
  meta += "state=" + state.name() + "\n";
  meta += "m=" + std::to_string(state.m) + "\n";
  meta += "delay_convention=path_b_factor_exp(-i*omega*tau)\n";
  meta += "flagged=" + std::string(scan.flagged ? "true" : "false") + "\n";
  meta += "max_quadrature_error=" + num(scan.max_quadrature_error) + "\n";
  meta += std::string("version=") + kVersion + "\n";
  write_file(dir / "dip_scan.meta.txt", meta);
  return kExitOk;
}

int run_image(const SimulationConfig &c, std::ostream &out, std::ostream &err) {
  const auto scene = make_scene(c);
  const auto &o = scene.overlaps();
  err << "vhom: rendering " << c.sensor.nx << "x" << c.sensor.ny << " images, m=" << c.state.m
      << ", " << scene.mask().describe() << "\n";
  auto nd = density_port_d(scene, c.sensor);
  auto cd = coincidence_port_d(scene, c.sensor);
  auto cc = coincidence_port_c(scene, c.sensor);
  auto sd = rescaled_signal(cd, nd, c.floor);
  auto mz = mach_zehnder_density(scene, c.sensor);
  const auto dir = prepare_output(c);
  for (auto *img : {&nd, &cd, &cc, &sd, &mz})
    tag_floor(*img, c.floor);
  emit(nd, dir, "n_d", c);
  emit(cd, dir, "c_d", c);
  emit(cc, dir, "c_c", c);
  emit(sd, dir, "s_d", c);
  emit(mz, dir, "mach_zehnder", c);
  out << "I1=" << num(o.i1.real()) << "," << num(o.i1.imag()) << " I2=" << num(o.i2.real()) << ","
      << num(o.i2.imag()) << " window=" << num(scene.window()) << "\n";
  return kExitOk;
}

int run_snr(const SimulationConfig &c, std::ostream &out, std::ostream &err) {
  const auto scene = make_scene(c);
  err << "vhom: SNR maps for N_tps=" << c.snr.n_tps << ", N_cs=" << num(c.snr.n_cs) << "\n";
  const auto cd = coincidence_port_d(scene, c.sensor);
  const auto mz = mach_zehnder_density(scene, c.sensor);
  auto tps = snr_two_photon_map(cd, c.snr.n_tps);
  auto cs = snr_coherent_map(mz, c.snr.n_cs);
  const auto dir = prepare_output(c);
  tag_floor(tps, c.floor);
  tag_floor(cs, c.floor);
  emit(tps, dir, "snr_tps", c);
  emit(cs, dir, "snr_cs", c);
  out << "snr_tps_max=" << num(tps.max_value()) << " snr_cs_max=" << num(cs.max_value()) << "\n";
  return kExitOk;
}

GrayImage bitmap(const SensorGrid &g, const std::vector<std::uint8_t> &bits) {
  GrayImage img;
  img.width = g.nx;
  img.height = g.ny;
  img.pixels.resize(g.size());
  for (int row = 0; row < g.ny; ++row)
    for (int ix = 0; ix < g.nx; ++ix)
      img.pixels[static_cast<std::size_t>(row) * g.nx + ix] =
          bits[static_cast<std::size_t>(g.ny - 1 - row) * g.nx + ix] ? 255 : 0;
  return img;
}

int run_encrypt_demo(const SimulationConfig &c, std::ostream &out, std::ostream &err) {
  const auto scene = make_scene(c);
  err << "vhom: encryption round trip with " << scene.mask().describe() << "\n";
  RoundtripThresholds t;
  t.floor = c.floor;
  auto r = encryption_roundtrip(scene, c.sensor, t);
  const auto dir = prepare_output(c);
  for (auto *img : {&r.density, &r.coincidence, &r.rescaled})
    tag_floor(*img, c.floor);
  emit(r.density, dir, "n_d", c);
  emit(r.coincidence, dir, "c_d", c);
  emit(r.rescaled, dir, "s_d", c);
  write_file(dir / "source.pgm", write_pgm(bitmap(c.sensor, r.source), false));
  write_file(dir / "recovered.pgm", write_pgm(bitmap(c.sensor, r.recovered), false));
  std::string report;
  report += "mask=" + scene.mask().describe() + "\n";
  report += "density_deviation=" + num(r.density_deviation) + "\n";
  report += "accuracy=" + num(r.accuracy) + "\n";
  report += "evaluated_pixels=" + std::to_string(r.evaluated_pixels) + "\n";
  report += "trivially_uniform=" + std::string(r.trivially_uniform ? "true" : "false") + "\n";
  report += "passed=" + std::string(r.passed ? "true" : "false") + "\n";
  report += "message=" + r.message + "\n";
  write_file(dir / "report.txt", report);
  out << report;
  return r.passed ? kExitOk : kExitFailed;
}

int run_masks(const SimulationConfig &c, std::ostream &out) {
  const auto dir = prepare_output(c);
  const double cell = c.mask.cell;
  const std::vector<std::pair<std::string, PhaseMask>> masks = {
      {"mask_sector_025", PhaseMask::sector(0.25, kPi)},
      {"mask_sector_050", PhaseMask::sector(0.5, kPi)},
      {"mask_checkerboard", PhaseMask::checkerboard(cell, kPi, 0.5 * cell, 0.5 * cell)},
      {"mask_uniform_pi", PhaseMask::uniform(kPi)},
      {"mask_configured", make_mask(c)},
  };
  for (const auto &[name, mask] : masks) {
    write_file(dir / (name + ".pgm"), write_pgm(rasterize_mask(mask, c.sensor, kPi), false));
    out << name << ".pgm " << mask.describe() << "\n";
  }
  return kExitOk;
}

} // namespace

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Hong-Ou-Mandel imaging with twisted photon pairs", "vhom"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Overrides o;
  app.add_option("-c,--config", o.config_path, "JSON configuration file");
  app.add_option("-o,--out", o.out_dir, "Output directory (overrides output.dir)");
  o.threads_opt.push_back(app.add_option("--threads", o.threads, "OpenMP threads (0 = default)"));

  auto add_state = [&o](CLI::App *sub) {
    o.family_opt.push_back(sub->add_option("--family", o.family, "State family"));
    o.m_opt.push_back(sub->add_option("--m", o.m, "OAM quantum number"));
    o.tau_opt.push_back(sub->add_option("--tau", o.tau, "Path-B delay in seconds"));
  };
  auto add_mask = [&o](CLI::App *sub) {
    sub->add_option("--mask", o.mask_kind, "uniform, sector, checkerboard or file");
    sub->add_option("--mask-file", o.mask_file, "PGM phase mask");
    o.fraction_opt.push_back(sub->add_option("--fraction", o.fraction, "Sector fraction"));
    o.window_opt.push_back(sub->add_option("--window", o.window, "Normalisation window radius (m)"));
  };

  bool full3d = false;
  auto *probs = app.add_subcommand("probabilities", "Analytic and numeric HOM probabilities");
  add_state(probs);
  probs->add_flag("--full3d", full3d, "Add the unreduced 3-D cross-check row");

  double span = 10.0;
  int points = 41;
  auto *dip = app.add_subcommand("dip-scan", "Coincidence probability versus delay");
  add_state(dip);
  dip->add_option("--span", span, "Half-width of the scan in sigma_z / c");
  dip->add_option("--points", points, "Number of delays");

  auto *image = app.add_subcommand("image", "Density, coincidence and re-scaled images");
  add_state(image);
  add_mask(image);

  auto *snr = app.add_subcommand("snr", "Two-photon and coherent-state SNR maps");
  add_state(snr);
  add_mask(snr);
  o.n_tps_opt.push_back(snr->add_option("--n-tps", o.n_tps, "Two-photon measurements"));
  o.n_cs_opt.push_back(snr->add_option("--n-cs", o.n_cs, "Photons per coherent pulse"));

  auto *enc = app.add_subcommand("encrypt-demo", "Texture hiding and recovery round trip");
  add_state(enc);
  add_mask(enc);

  auto *masks = app.add_subcommand("masks", "Write the built-in masks as PGM");
  add_mask(masks);

  auto *self = app.add_subcommand("selftest", "Run the invariant suite");

  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*self) {
      const auto rows = run_selftest();
      out << format_selftest(rows);
      for (const auto &r : rows)
        if (!r.passed)
          return kExitFailed;
      return kExitOk;
    }
    const auto config = load_config(o);
    if (*probs)
      return run_probabilities(config, full3d, out, err);
    if (*dip)
      return run_dip_scan(config, span, points, out, err);
    if (*image)
      return run_image(config, out, err);
    if (*snr)
      return run_snr(config, out, err);
    if (*enc)
      return run_encrypt_demo(config, out, err);
    if (*masks)
      return run_masks(config, out);
  } catch (const ConfigError &e) {
    err << "vhom: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError &e) {
    err << "vhom: invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedError &e) {
    err << "vhom: unsupported: " << e.what() << "\n";
    return kExitConfig;
  } catch (const FormatError &e) {
    err << "vhom: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error &e) {
    err << "vhom: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception &e) {
    err << "vhom: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

int cli_main(int argc, char **argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

} // namespace vhom
