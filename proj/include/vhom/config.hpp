#pragma once
#include <vhom/hom_engine.hpp>
#include <vhom/imaging.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace vhom {

inline constexpr const char *kVersion = "vhom 1.0.0";

struct EnvelopeConfig {
  double wavelength = 500e-9;
  double sigma_z = 500e-6;
  double sigma_rho = 500e-6;
  double theta_c = 0.001 * kPi;
};

struct StateConfig {
  std::string family = "product_opposite";
  int m = 1;
  /// Path-B delay in seconds.
  double tau = 0.0;
};

struct MaskConfig {
  /// "uniform", "sector", "checkerboard" or "file".
  std::string kind = "sector";
  double phase = 0.0;     // uniform
  double fraction = 0.25; // sector
  double start = 0.0;     // sector
  double step = kPi;      // sector, checkerboard
  double cell = 60e-6;    // checkerboard
  /// Defaults to half a cell, which centres a cell on the origin.
  std::optional<double> offset_x;
  std::optional<double> offset_y;
  std::string file; // PGM path, relative to the working directory
  double pitch = 10e-6;
  double center_x = 0.0;
  double center_y = 0.0;
  double phi_max = kPi;
};

struct QuadratureConfig {
  int n_rho = 128;
  int n_phi = 256;
  double window_factor = 1.5;
  /// Explicit window radius in metres; overrides window_factor.
  std::optional<double> window;
  AzimuthalGrid grid = AzimuthalGrid::Symmetric;
};

struct SnrConfig {
  long long n_tps = 10000;
  double n_cs = 10000.0;
};

struct OutputConfig {
  std::string dir = "vhom_out";
  bool csv = true;
  bool pgm = true;
};

struct SimulationConfig {
  EnvelopeConfig envelope;
  StateConfig state;
  MaskConfig mask;
  SensorGrid sensor;
  QuadratureConfig quadrature;
  KGrid hom;
  double floor = 1e-3;
  SnrConfig snr;
  /// OpenMP threads; 0 keeps the runtime default.
  int threads = 0;
  OutputConfig output;
};

/// Strict JSON parse: unknown keys, wrong types and out-of-range values
/// raise ConfigError naming the key path, e.g. "envelope.theta_c".
SimulationConfig parse_config(std::string_view text);

/// Effective configuration as pretty-printed JSON with a fixed key order.
/// parse_config(config_to_json(c)) reproduces c.
std::string config_to_json(const SimulationConfig &config);

BesselGaussEnvelope make_envelope(const SimulationConfig &config);
TwoPhotonState make_state(const SimulationConfig &config);
/// Throws FormatError when a mask file cannot be read.
PhaseMask make_mask(const SimulationConfig &config);
double effective_window(const SimulationConfig &config);
PolarResolution make_resolution(const SimulationConfig &config);

} // namespace vhom
