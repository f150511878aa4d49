#include <vhom/errors.hpp>
#include <vhom/imaging.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace vhom {

const char *units_name(ImageUnits units) {
  switch (units) {
  case ImageUnits::ProbabilityPerPixel:
    return "probability-per-pixel";
  case ImageUnits::Dimensionless:
    return "dimensionless";
  case ImageUnits::Density:
    return "density";
  }
  return "unknown";
}

double ScalarImage::total() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (valid[k])
      sum += values[k];
  return sum;
}

double ScalarImage::max_value() const {
  double best = -HUGE_VAL;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (valid[k])
      best = std::max(best, values[k]);
  return best;
}

double ScalarImage::min_value() const {
  double best = HUGE_VAL;
  for (std::size_t k = 0; k < values.size(); ++k)
    if (valid[k])
      best = std::min(best, values[k]);
  return best;
}

std::size_t ScalarImage::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

OverlapIntegrals overlaps_at(const TransverseProfile &profile, const PhaseMask &mask, int n_rho,
                             int n_phi, AzimuthalGrid azimuthal) {
  auto weight = [&profile](double rho) { return profile.density(rho); };
  const auto i1 = integrate_2d_polar(
      [&](double rho, double phi) {
        return weight(rho) * std::polar(1.0, -mask.phase_polar(rho, phi));
      },
      profile.window(), n_rho, n_phi, azimuthal);
  const auto i2 = integrate_2d_polar(
      [&](double rho, double phi) {
        return weight(rho) * std::polar(1.0, -mask.phase_polar(rho, -phi));
      },
      profile.window(), n_rho, n_phi, azimuthal);
  return {i1, i2, profile.window(), 0.0};
}

void check_resolution(const PolarResolution &r) {
  if (r.n_rho < 8 || r.n_rho > 2048)
    throw DomainError("overlap integrals: n_rho must lie in [8, 2048]");
  if (r.n_phi < 8 || r.n_phi % 4 != 0)
    throw DomainError("overlap integrals: n_phi must be a multiple of 4, at least 8");
}

ScalarImage make_image(const ImagingScene &scene, const SensorGrid &grid, std::vector<double> v,
                       ImageUnits units, const char *quantity) {
  ScalarImage img;
  img.grid = grid;
  img.values = std::move(v);
  img.valid.assign(img.values.size(), 1);
  img.units = units;
  img.metadata = scene.metadata();
  img.metadata["quantity"] = quantity;
  img.metadata["units"] = units_name(units);
  return img;
}

} // namespace

OverlapIntegrals overlap_integrals(const TwistedMode &mode, const PhaseMask &mask, double window,
                                   PolarResolution resolution) {
  check_resolution(resolution);
  const TransverseProfile profile(mode, window);
  auto fine = overlaps_at(profile, mask, resolution.n_rho, resolution.n_phi,
                          resolution.azimuthal);
  const auto coarse = overlaps_at(profile, mask, resolution.n_rho / 2, resolution.n_phi / 2,
                                  resolution.azimuthal);
  fine.quadrature_error = std::max(std::abs(fine.i1 - coarse.i1), std::abs(fine.i2 - coarse.i2));
  return fine;
}

ImagingScene::ImagingScene(const TwistedMode &mode, PhaseMask mask, double window,
                           PolarResolution resolution)
    : mode_(mode), mask_(std::move(mask)), profile_(mode, window),
      overlaps_(overlap_integrals(mode, mask_, window, resolution)), resolution_(resolution) {}

std::map<std::string, std::string> ImagingScene::metadata() const {
  return {
      {"state", "product_opposite"},
      {"m", std::to_string(mode_.m)},
      {"mask", mask_.describe()},
      {"window", number(window())},
      {"normalization", number(profile_.normalization())},
      {"I1_re", number(overlaps_.i1.real())},
      {"I1_im", number(overlaps_.i1.imag())},
      {"I2_re", number(overlaps_.i2.real())},
      {"I2_im", number(overlaps_.i2.imag())},
      {"overlap_error", number(overlaps_.quadrature_error)},
      {"n_rho", std::to_string(resolution_.n_rho)},
      {"n_phi", std::to_string(resolution_.n_phi)},
  };
}

double default_window(const SensorGrid &grid, double factor) {
  grid.validate();
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw DomainError("window factor must be positive");
  return factor * grid.half_diagonal();
}

ScalarImage density_port_d(const ImagingScene &scene, const SensorGrid &grid, Execution exec) {
  const auto &profile = scene.profile();
  const auto &mask = scene.mask();
  const Complex diff = scene.overlaps().i1 - scene.overlaps().i2;
  auto f = [&](double x, double y) {
    const double F = profile.density(std::hypot(x, y));
    if (F == 0.0)
      return 0.0;
    const Complex cross = diff * std::polar(1.0, mask.phase(x, y));
    return 0.25 * F * (4.0 + 2.0 * cross.real());
  };
  return make_image(scene, grid, render_pixels(grid, f, exec), ImageUnits::ProbabilityPerPixel,
                    "n_d");
}

ScalarImage coincidence_port_d(const ImagingScene &scene, const SensorGrid &grid,
                               Execution exec) {
  const auto &profile = scene.profile();
  const auto &mask = scene.mask();
  const Complex i2 = scene.overlaps().i2;
  auto f = [&](double x, double y) {
    const double F = profile.density(std::hypot(x, y));
    if (F == 0.0)
      return 0.0;
    return 0.25 * F * (2.0 - 2.0 * (i2 * std::polar(1.0, mask.phase(x, y))).real());
  };
  return make_image(scene, grid, render_pixels(grid, f, exec), ImageUnits::ProbabilityPerPixel,
                    "c_d");
}

ScalarImage coincidence_port_c(const ImagingScene &scene, const SensorGrid &grid,
                               Execution exec) {
  const auto &profile = scene.profile();
  const auto &mask = scene.mask();
  const Complex i1 = scene.overlaps().i1;
  auto f = [&](double x, double y) {
    const double F = profile.density(std::hypot(x, y));
    if (F == 0.0)
      return 0.0;
    return 0.25 * F * (2.0 - 2.0 * (i1 * std::polar(1.0, mask.phase(x, -y))).real());
  };
  return make_image(scene, grid, render_pixels(grid, f, exec), ImageUnits::ProbabilityPerPixel,
                    "c_c");
}

ScalarImage mach_zehnder_density(const ImagingScene &scene, const SensorGrid &grid,
                                 Execution exec) {
  const auto &profile = scene.profile();
  const auto &mask = scene.mask();
  auto f = [&](double x, double y) {
    const double F = profile.density(std::hypot(x, y));
    if (F == 0.0)
      return 0.0;
    const double c = std::cos(0.5 * mask.phase(x, y));
    return F * c * c;
  };
  return make_image(scene, grid, render_pixels(grid, f, exec), ImageUnits::ProbabilityPerPixel,
                    "mach_zehnder");
}

ScalarImage rescaled_signal(const ScalarImage &coincidence, const ScalarImage &density,
                            double floor) {
  if (!(coincidence.grid == density.grid) || coincidence.values.size() != density.values.size())
    throw ContractError("rescaled signal: images come from different sensor grids");
  for (const char *key : {"state", "m", "mask", "window"}) {
    auto a = coincidence.metadata.find(key);
    auto b = density.metadata.find(key);
    if (a != coincidence.metadata.end() && b != density.metadata.end() && a->second != b->second)
      throw ContractError(std::string("rescaled signal: images disagree on ") + key);
  }
  if (!(floor > 0.0) || !std::isfinite(floor))
    throw DomainError("rescaled signal: floor must be positive");

  ScalarImage out;
  out.grid = density.grid;
  out.units = ImageUnits::Dimensionless;
  out.metadata = density.metadata;
  out.metadata["quantity"] = "s_d";
  out.metadata["units"] = units_name(out.units);
  out.metadata["floor"] = number(floor);
  out.values.assign(density.values.size(), 0.0);
  out.valid.assign(density.values.size(), 0);
  const double cut = floor * density.max_value();
  for (std::size_t k = 0; k < density.values.size(); ++k) {
    const double n = density.values[k];
    if (!density.valid[k] || !coincidence.valid[k] || !(n > 0.0) || n < cut)
      continue;
    const double half = 0.5 * n;
    out.values[k] = (coincidence.values[k] - half) / half;
    out.valid[k] = 1;
  }
  return out;
}

double snr_two_photon(double coincidence, long long n_measurements) {
  if (n_measurements < 1)
    throw DomainError("snr_two_photon: need at least one measurement");
  if (!(coincidence >= 0.0 && coincidence < 1.0))
    throw DomainError("snr_two_photon: coincidence value must lie in [0, 1)");
  if (coincidence == 0.0)
    return 0.0;
  return std::sqrt(static_cast<double>(n_measurements)) * coincidence /
         std::sqrt(coincidence - coincidence * coincidence);
}

double snr_coherent(double mean_count) {
  if (!(mean_count >= 0.0) || !std::isfinite(mean_count))
    throw DomainError("snr_coherent: mean count must be non-negative");
  return std::sqrt(mean_count);
}

ScalarImage snr_two_photon_map(const ScalarImage &coincidence, long long n_measurements) {
  ScalarImage out = coincidence;
  out.units = ImageUnits::Dimensionless;
  out.metadata["quantity"] = "snr_tps";
  out.metadata["units"] = units_name(out.units);
  out.metadata["n_measurements"] = std::to_string(n_measurements);
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = out.valid[k] ? snr_two_photon(std::max(0.0, out.values[k]), n_measurements)
                                 : 0.0;
  return out;
}

ScalarImage snr_coherent_map(const ScalarImage &density, double n_photons) {
  if (!(n_photons >= 0.0) || !std::isfinite(n_photons))
    throw DomainError("snr_coherent_map: photon number must be non-negative");
  ScalarImage out = density;
  out.units = ImageUnits::Dimensionless;
  out.metadata["quantity"] = "snr_cs";
  out.metadata["units"] = units_name(out.units);
  out.metadata["n_photons"] = number(n_photons);
  for (std::size_t k = 0; k < out.values.size(); ++k)
    out.values[k] = out.valid[k] ? snr_coherent(std::max(0.0, n_photons * out.values[k])) : 0.0;
  return out;
}

RoundtripReport encryption_roundtrip(const ImagingScene &scene, const SensorGrid &grid,
                                     const RoundtripThresholds &thresholds, Execution exec) {
  RoundtripReport r;
  r.density = density_port_d(scene, grid, exec);
  r.coincidence = coincidence_port_d(scene, grid, exec);
  r.rescaled = rescaled_signal(r.coincidence, r.density, thresholds.floor);

  const ImagingScene plain(scene.mode(), PhaseMask::uniform(0.0), scene.window(),
                           scene.resolution());
  const auto reference = density_port_d(plain, grid, exec);
  const double peak = reference.max_value();
  for (std::size_t k = 0; k < reference.values.size(); ++k)
    r.density_deviation =
        std::max(r.density_deviation, std::abs(r.density.values[k] - reference.values[k]));
  if (peak > 0.0)
    r.density_deviation /= peak;
  const bool density_ok = r.density_deviation < thresholds.max_density_deviation;

  const std::size_t n = grid.size();
  r.source.assign(n, 0);
  r.recovered.assign(n, 0);
  const double re_i2 = scene.overlaps().i2.real();
  const double sign = re_i2 > 0.0 ? 1.0 : (re_i2 < 0.0 ? -1.0 : 0.0);
  const double cut = thresholds.support * r.density.max_value();
  std::size_t correct = 0, ones = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const int ix = static_cast<int>(k % grid.nx);
    const int iy = static_cast<int>(k / grid.nx);
    const double xc = grid.pixel_left(ix) + 0.5 * grid.pitch;
    const double yc = grid.pixel_bottom(iy) + 0.5 * grid.pitch;
    r.source[k] = std::cos(scene.mask().phase(xc, yc)) < 0.0 ? 1 : 0;
    r.recovered[k] = r.rescaled.valid[k] && r.rescaled.values[k] * sign > 0.0 ? 1 : 0;
    if (r.density.values[k] < cut || !r.rescaled.valid[k])
      continue;
    ++r.evaluated_pixels;
    ones += r.source[k];
    correct += r.source[k] == r.recovered[k];
  }

  r.trivially_uniform = scene.mask().kind() == MaskKind::Uniform || ones == 0 ||
                        ones == r.evaluated_pixels;
  if (r.trivially_uniform) {
    std::fill(r.recovered.begin(), r.recovered.end(), std::uint8_t{0});
    r.accuracy = 1.0;
    r.passed = density_ok;
    r.message = "trivially uniform source; nothing to recover";
  } else {
    r.accuracy = r.evaluated_pixels ? static_cast<double>(correct) / r.evaluated_pixels : 0.0;
    r.passed = density_ok && r.accuracy >= thresholds.min_accuracy;
    if (sign == 0.0)
      r.message = "Re I2 = 0: the coincidence image carries no sign information";
    else if (!density_ok)
      r.message = "texture leaked into the density image";
    else if (!r.passed)
      r.message = "recovery accuracy below threshold";
    else
      r.message = "ok";
  }
  return r;
}

} // namespace vhom
