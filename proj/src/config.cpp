#include <vhom/config.hpp>
#include <vhom/errors.hpp>
#include <vhom/pgm.hpp>

#include <json.hpp>

#include <cmath>
#include <initializer_list>
#include <limits>

namespace vhom {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string join(const std::string &path, const std::string &key) {
  return path.empty() ? key : path + "." + key;
}

void check_keys(const json &j, const std::string &path, std::initializer_list<const char *> keys) {
  if (!j.is_object())
    throw ConfigError(path.empty() ? "<root>" : path, "expected a JSON object");
  for (const auto &[k, v] : j.items()) {
    bool known = false;
    for (const char *allowed : keys)
      known = known || k == allowed;
    if (!known)
      throw ConfigError(join(path, k), "unknown key");
  }
}

// Each reader leaves `out` untouched when the key is absent.
void read(const json &j, const std::string &path, const char *key, double &out) {
  if (!j.contains(key))
    return;
  const auto &v = j.at(key);
  if (!v.is_number())
    throw ConfigError(join(path, key), "expected a number");
  out = v.get<double>();
  if (!std::isfinite(out))
    throw ConfigError(join(path, key), "must be finite");
}

void read(const json &j, const std::string &path, const char *key, std::optional<double> &out) {
  if (!j.contains(key))
    return;
  double v = 0.0;
  read(j, path, key, v);
  out = v;
}

void read(const json &j, const std::string &path, const char *key, long long &out) {
  if (!j.contains(key))
    return;
  const auto &v = j.at(key);
  if (!v.is_number_integer())
    throw ConfigError(join(path, key), "expected an integer");
  out = v.get<long long>();
}

void read(const json &j, const std::string &path, const char *key, int &out) {
  long long v = out;
  read(j, path, key, v);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(join(path, key), "integer out of range");
  out = static_cast<int>(v);
}

void read(const json &j, const std::string &path, const char *key, bool &out) {
  if (!j.contains(key))
    return;
  const auto &v = j.at(key);
  if (!v.is_boolean())
    throw ConfigError(join(path, key), "expected true or false");
  out = v.get<bool>();
}

void read(const json &j, const std::string &path, const char *key, std::string &out) {
  if (!j.contains(key))
    return;
  const auto &v = j.at(key);
  if (!v.is_string())
    throw ConfigError(join(path, key), "expected a string");
  out = v.get<std::string>();
}

void require(bool ok, const std::string &path, const char *what) {
  if (!ok)
    throw ConfigError(path, what);
}

void parse_envelope(const json &j, EnvelopeConfig &e) {
  const std::string p = "envelope";
  check_keys(j, p, {"wavelength", "sigma_z", "sigma_rho", "theta_c"});
  read(j, p, "wavelength", e.wavelength);
  read(j, p, "sigma_z", e.sigma_z);
  read(j, p, "sigma_rho", e.sigma_rho);
  read(j, p, "theta_c", e.theta_c);
  require(e.wavelength > 0.0, "envelope.wavelength", "must be positive");
  require(e.sigma_z > 0.0, "envelope.sigma_z", "must be positive");
  require(e.sigma_rho > 0.0, "envelope.sigma_rho", "must be positive");
  require(e.theta_c > 0.0 && e.theta_c < 0.5 * kPi, "envelope.theta_c",
          "must lie strictly between 0 and pi/2");
}

void parse_state(const json &j, StateConfig &s) {
  const std::string p = "state";
  check_keys(j, p, {"family", "m", "tau"});
  read(j, p, "family", s.family);
  read(j, p, "m", s.m);
  read(j, p, "tau", s.tau);
  StateFamily f;
  Sign sign;
  try {
    parse_family(s.family, f, sign);
  } catch (const DomainError &) {
    throw ConfigError("state.family", "unknown family '" + s.family +
                                          "' (product_opposite, product_same, psi_plus, "
                                          "psi_minus, phi_plus, phi_minus)");
  }
  require(std::abs(s.m) <= kMaxBesselOrder, "state.m", "|m| must not exceed 60");
}

void parse_mask(const json &j, MaskConfig &m) {
  const std::string p = "mask";
  check_keys(j, p,
             {"kind", "phase", "fraction", "start", "step", "cell", "offset_x", "offset_y", "file",
              "pitch", "center", "phi_max"});
  read(j, p, "kind", m.kind);
  read(j, p, "phase", m.phase);
  read(j, p, "fraction", m.fraction);
  read(j, p, "start", m.start);
  read(j, p, "step", m.step);
  read(j, p, "cell", m.cell);
  read(j, p, "offset_x", m.offset_x);
  read(j, p, "offset_y", m.offset_y);
  read(j, p, "file", m.file);
  read(j, p, "pitch", m.pitch);
  read(j, p, "phi_max", m.phi_max);
  if (j.contains("center")) {
    const auto &c = j.at("center");
    require(c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number(), "mask.center",
            "expected [x, y]");
    m.center_x = c[0].get<double>();
    m.center_y = c[1].get<double>();
    require(std::isfinite(m.center_x) && std::isfinite(m.center_y), "mask.center",
            "must be finite");
  }
  require(m.kind == "uniform" || m.kind == "sector" || m.kind == "checkerboard" ||
              m.kind == "file",
          "mask.kind", "must be uniform, sector, checkerboard or file");
  require(m.fraction >= 0.0 && m.fraction <= 1.0, "mask.fraction", "must lie in [0, 1]");
  require(m.cell > 0.0, "mask.cell", "must be positive");
  require(m.pitch > 0.0, "mask.pitch", "must be positive");
  require(m.phi_max > 0.0, "mask.phi_max", "must be positive");
  require(m.kind != "file" || !m.file.empty(), "mask.file", "required when kind is file");
}

void parse_sensor(const json &j, SensorGrid &g) {
  const std::string p = "sensor";
  check_keys(j, p, {"nx", "ny", "pitch", "center", "subsamples"});
  read(j, p, "nx", g.nx);
  read(j, p, "ny", g.ny);
  read(j, p, "pitch", g.pitch);
  read(j, p, "subsamples", g.subsamples);
  if (j.contains("center")) {
    const auto &c = j.at("center");
    require(c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number(),
            "sensor.center", "expected [x, y]");
    g.center_x = c[0].get<double>();
    g.center_y = c[1].get<double>();
    require(std::isfinite(g.center_x) && std::isfinite(g.center_y), "sensor.center",
            "must be finite");
  }
  require(g.nx >= 1 && g.nx <= 4096, "sensor.nx", "must lie in [1, 4096]");
  require(g.ny >= 1 && g.ny <= 4096, "sensor.ny", "must lie in [1, 4096]");
  require(g.pitch > 0.0, "sensor.pitch", "must be positive");
  require(g.subsamples >= 1 && g.subsamples <= 64, "sensor.subsamples", "must lie in [1, 64]");
}

void parse_quadrature(const json &j, QuadratureConfig &q) {
  const std::string p = "quadrature";
  check_keys(j, p, {"n_rho", "n_phi", "window_factor", "window", "grid"});
  read(j, p, "n_rho", q.n_rho);
  read(j, p, "n_phi", q.n_phi);
  read(j, p, "window_factor", q.window_factor);
  read(j, p, "window", q.window);
  std::string grid = q.grid == AzimuthalGrid::Symmetric ? "symmetric" : "asymmetric";
  read(j, p, "grid", grid);
  require(grid == "symmetric" || grid == "asymmetric", "quadrature.grid",
          "must be symmetric or asymmetric");
  q.grid = grid == "symmetric" ? AzimuthalGrid::Symmetric : AzimuthalGrid::Asymmetric;
  require(q.n_rho >= 8 && q.n_rho <= 2048, "quadrature.n_rho", "must lie in [8, 2048]");
  require(q.n_phi >= 8 && q.n_phi <= 65536 && q.n_phi % 4 == 0, "quadrature.n_phi",
          "must be a multiple of 4 in [8, 65536]");
  require(q.window_factor > 0.0, "quadrature.window_factor", "must be positive");
  require(!q.window || *q.window > 0.0, "quadrature.window", "must be positive");
}

void parse_hom(const json &j, KGrid &k) {
  const std::string p = "hom";
  check_keys(j, p, {"n_kz", "n_rho"});
  read(j, p, "n_kz", k.n_kz);
  read(j, p, "n_rho", k.n_rho);
  require(k.n_kz >= 16 && k.n_kz <= 2048, "hom.n_kz", "must lie in [16, 2048]");
  require(k.n_rho >= 16 && k.n_rho <= 2048, "hom.n_rho", "must lie in [16, 2048]");
}

void parse_snr(const json &j, SnrConfig &s) {
  const std::string p = "snr";
  check_keys(j, p, {"n_tps", "n_cs"});
  read(j, p, "n_tps", s.n_tps);
  read(j, p, "n_cs", s.n_cs);
  require(s.n_tps >= 1, "snr.n_tps", "must be at least 1");
  require(s.n_cs >= 0.0, "snr.n_cs", "must be non-negative");
}

void parse_output(const json &j, OutputConfig &o) {
  const std::string p = "output";
  check_keys(j, p, {"dir", "csv", "pgm"});
  read(j, p, "dir", o.dir);
  read(j, p, "csv", o.csv);
  read(j, p, "pgm", o.pgm);
  require(!o.dir.empty(), "output.dir", "must not be empty");
}

} // namespace

SimulationConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error &e) {
    throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
  }
  check_keys(root, "",
             {"envelope", "state", "mask", "sensor", "quadrature", "hom", "floor", "snr",
              "threads", "output"});
  SimulationConfig c;
  if (root.contains("envelope"))
    parse_envelope(root["envelope"], c.envelope);
  if (root.contains("state"))
    parse_state(root["state"], c.state);
  if (root.contains("mask"))
    parse_mask(root["mask"], c.mask);
  if (root.contains("sensor"))
    parse_sensor(root["sensor"], c.sensor);
  if (root.contains("quadrature"))
    parse_quadrature(root["quadrature"], c.quadrature);
  if (root.contains("hom"))
    parse_hom(root["hom"], c.hom);
  if (root.contains("snr"))
    parse_snr(root["snr"], c.snr);
  if (root.contains("output"))
    parse_output(root["output"], c.output);
  read(root, "", "floor", c.floor);
  require(c.floor > 0.0 && c.floor < 1.0, "floor", "must lie in (0, 1)");
  read(root, "", "threads", c.threads);
  require(c.threads >= 0 && c.threads <= 1024, "threads", "must lie in [0, 1024]");
  return c;
}

std::string config_to_json(const SimulationConfig &c) {
  ordered_json j;
  j["envelope"] = {{"wavelength", c.envelope.wavelength},
                   {"sigma_z", c.envelope.sigma_z},
                   {"sigma_rho", c.envelope.sigma_rho},
                   {"theta_c", c.envelope.theta_c}};
  j["state"] = {{"family", c.state.family}, {"m", c.state.m}, {"tau", c.state.tau}};
  ordered_json mask = {{"kind", c.mask.kind},   {"phase", c.mask.phase}, {"fraction", c.mask.fraction},
                       {"start", c.mask.start}, {"step", c.mask.step},   {"cell", c.mask.cell}};
  if (c.mask.offset_x)
    mask["offset_x"] = *c.mask.offset_x;
  if (c.mask.offset_y)
    mask["offset_y"] = *c.mask.offset_y;
  mask["file"] = c.mask.file;
  mask["pitch"] = c.mask.pitch;
  mask["center"] = {c.mask.center_x, c.mask.center_y};
  mask["phi_max"] = c.mask.phi_max;
  j["mask"] = mask;
  j["sensor"] = {{"nx", c.sensor.nx},
                 {"ny", c.sensor.ny},
                 {"pitch", c.sensor.pitch},
                 {"center", {c.sensor.center_x, c.sensor.center_y}},
                 {"subsamples", c.sensor.subsamples}};
  ordered_json quad = {{"n_rho", c.quadrature.n_rho},
                       {"n_phi", c.quadrature.n_phi},
                       {"window_factor", c.quadrature.window_factor}};
  if (c.quadrature.window)
    quad["window"] = *c.quadrature.window;
  quad["grid"] = c.quadrature.grid == AzimuthalGrid::Symmetric ? "symmetric" : "asymmetric";
  j["quadrature"] = quad;
  j["hom"] = {{"n_kz", c.hom.n_kz}, {"n_rho", c.hom.n_rho}};
  j["floor"] = c.floor;
  j["snr"] = {{"n_tps", c.snr.n_tps}, {"n_cs", c.snr.n_cs}};
  j["threads"] = c.threads;
  j["output"] = {{"dir", c.output.dir}, {"csv", c.output.csv}, {"pgm", c.output.pgm}};
  return j.dump(2) + "\n";
}

BesselGaussEnvelope make_envelope(const SimulationConfig &c) {
  return BesselGaussEnvelope::from_wavelength(c.envelope.wavelength, c.envelope.sigma_z,
                                              c.envelope.sigma_rho, c.envelope.theta_c);
}

TwoPhotonState make_state(const SimulationConfig &c) {
  StateFamily family;
  Sign sign;
  parse_family(c.state.family, family, sign);
  return {family, c.state.m, make_envelope(c), c.state.tau, sign};
}

PhaseMask make_mask(const SimulationConfig &c) {
  const auto &m = c.mask;
  if (m.kind == "uniform")
    return PhaseMask::uniform(m.phase);
  if (m.kind == "sector")
    return PhaseMask::sector(m.fraction, m.step, m.start);
  if (m.kind == "checkerboard")
    return PhaseMask::checkerboard(m.cell, m.step, m.offset_x.value_or(0.5 * m.cell),
                                   m.offset_y.value_or(0.5 * m.cell));
  return read_mask_pgm(read_file(m.file), m.pitch, m.center_x, m.center_y, m.phi_max);
}

double effective_window(const SimulationConfig &c) {
  if (c.quadrature.window)
    return *c.quadrature.window;
  return default_window(c.sensor, c.quadrature.window_factor);
}

PolarResolution make_resolution(const SimulationConfig &c) {
  return {c.quadrature.n_rho, c.quadrature.n_phi, c.quadrature.grid};
}

} // namespace vhom
