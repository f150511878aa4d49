#pragma once
#include <vhom/kernels.hpp>
#include <vhom/phase_mask.hpp>
#include <vhom/photon_states.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace vhom {

enum class ImageUnits { ProbabilityPerPixel, Dimensionless, Density };

const char *units_name(ImageUnits units);

/// Real-valued field on a sensor grid. values[iy * nx + ix], iy = 0 lowest.
struct ScalarImage {
  SensorGrid grid;
  std::vector<double> values;
  /// 1 where the value is meaningful; rescaled signals clear it below the floor.
  std::vector<std::uint8_t> valid;
  ImageUnits units = ImageUnits::ProbabilityPerPixel;
  std::map<std::string, std::string> metadata;

  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * grid.nx + ix]; }
  bool is_valid(int ix, int iy) const {
    return valid[static_cast<std::size_t>(iy) * grid.nx + ix] != 0;
  }
  /// Sum and extrema over valid pixels.
  double total() const;
  double max_value() const;
  double min_value() const;
  std::size_t valid_count() const;
};

struct OverlapIntegrals {
  Complex i1;
  Complex i2;
  double window = 0.0;
  /// Largest change of I1 or I2 when both resolutions are halved.
  double quadrature_error = 0.0;
};

struct PolarResolution {
  int n_rho = 128;
  int n_phi = 256;
  AzimuthalGrid azimuthal = AzimuthalGrid::Symmetric;
};

/// I1 = int F e^{-i Phi(rho, phi)} and I2 = int F e^{-i Phi(rho, -phi)} over
/// the window, with F the normalised transverse density of `mode`.
/// Throws WindowError when the window misses the main lobe.
OverlapIntegrals overlap_integrals(const TwistedMode &mode, const PhaseMask &mask, double window,
                                   PolarResolution resolution = {});

/// Product imaging state: an OAM m photon whose path-A partner picks up the
/// mask phase. Holds the normalised profile and its overlap integrals.
class ImagingScene {
public:
  ImagingScene(const TwistedMode &mode, PhaseMask mask, double window,
               PolarResolution resolution = {});

  const TwistedMode &mode() const { return mode_; }
  const PhaseMask &mask() const { return mask_; }
  const TransverseProfile &profile() const { return profile_; }
  const OverlapIntegrals &overlaps() const { return overlaps_; }
  double window() const { return profile_.window(); }
  const PolarResolution &resolution() const { return resolution_; }

  /// Metadata shared by every image rendered from this scene.
  std::map<std::string, std::string> metadata() const;

private:
  TwistedMode mode_;
  PhaseMask mask_;
  TransverseProfile profile_;
  OverlapIntegrals overlaps_;
  PolarResolution resolution_;
};

/// Default normalisation window: 1.5 sensor half-diagonals.
double default_window(const SensorGrid &grid, double factor = 1.5);

/// n_d = F/4 {4 + [(I1 - I2) e^{i Phi} + c.c.]}, pixel-integrated.
ScalarImage density_port_d(const ImagingScene &scene, const SensorGrid &grid,
                           Execution exec = Execution::Parallel);

/// <C_d> = F/4 [2 - (I2 e^{i Phi(x, y)} + c.c.)], pixel-integrated.
ScalarImage coincidence_port_d(const ImagingScene &scene, const SensorGrid &grid,
                               Execution exec = Execution::Parallel);

/// <C_c> = F/4 [2 - (I1 e^{i Phi(x, -y)} + c.c.)], pixel-integrated.
ScalarImage coincidence_port_c(const ImagingScene &scene, const SensorGrid &grid,
                               Execution exec = Execution::Parallel);

/// F cos^2(Phi / 2): two coherent pulses recombined in a Mach-Zehnder setup.
ScalarImage mach_zehnder_density(const ImagingScene &scene, const SensorGrid &grid,
                                 Execution exec = Execution::Parallel);

/// S = (C - n/2) / (n/2) on pixels with n >= floor * max(n); other pixels
/// are marked invalid and hold 0. Throws ContractError when the grids or
/// the state/mask provenance differ, DomainError unless floor > 0.
ScalarImage rescaled_signal(const ScalarImage &coincidence, const ScalarImage &density,
                            double floor = 1e-3);

/// sqrt(N) C / sqrt(C - C^2). Returns 0 for C = 0; DomainError unless
/// 0 <= C < 1 and N >= 1.
double snr_two_photon(double coincidence, long long n_measurements);

/// sqrt(mean) for a Poissonian count. DomainError for a negative mean.
double snr_coherent(double mean_count);

/// Pixel map of snr_two_photon over a coincidence image.
ScalarImage snr_two_photon_map(const ScalarImage &coincidence, long long n_measurements);

/// Pixel map of snr_coherent for n_photons times a density image.
ScalarImage snr_coherent_map(const ScalarImage &density, double n_photons);

struct RoundtripThresholds {
  /// Largest accepted max|n_d - n_d(no mask)| / max n_d(no mask).
  double max_density_deviation = 1e-6;
  /// Smallest accepted fraction of correctly recovered pixels.
  double min_accuracy = 0.99;
  /// Pixels count only where n_d >= support * max(n_d).
  double support = 0.01;
  double floor = 1e-3;
};

struct RoundtripReport {
  ScalarImage density;
  ScalarImage coincidence;
  ScalarImage rescaled;
  /// Source bits (cos Phi < 0 at the pixel centre) and recovered bits,
  /// row layout as in ScalarImage.
  std::vector<std::uint8_t> source;
  std::vector<std::uint8_t> recovered;
  double density_deviation = 0.0;
  double accuracy = 0.0;
  std::size_t evaluated_pixels = 0;
  /// The source has no texture (all bits equal); nothing to recover.
  bool trivially_uniform = false;
  bool passed = false;
  std::string message;
};

/// Renders n_d, C_d and S_d and recovers the bitmap by the sign rule
/// bit = [S_d * sign(Re I2) > 0]. Failure is reported, not thrown.
RoundtripReport encryption_roundtrip(const ImagingScene &scene, const SensorGrid &grid,
                                     const RoundtripThresholds &thresholds = {},
                                     Execution exec = Execution::Parallel);

} // namespace vhom
