#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace vhom {

enum class MaskKind { Uniform, Sector, Checkerboard, Raster };

/// Phase samples on a regular Cartesian raster.
///
/// Row-major with row 0 at the lowest y. Node (ix, iy) sits at
/// center + ((ix - (nx-1)/2) * pitch, (iy - (ny-1)/2) * pitch).
struct PhaseRaster {
  int nx = 0;
  int ny = 0;
  double pitch = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
  std::vector<double> phases;
  /// 8-bit source levels when the raster came from a grey-scale image.
  std::vector<std::uint8_t> levels;
  double phi_max = 0.0;
};

/// Texture phase Phi(x, y) imprinted on the path-A photon.
///
/// Raster masks interpolate bilinearly between nodes and are zero outside
/// the raster extent (half a pitch beyond the outermost nodes).
class PhaseMask {
public:
  static PhaseMask uniform(double phase);
  /// Phase `step` on the azimuthal wedge [start, start + 2*pi*fraction).
  static PhaseMask sector(double fraction, double step, double start = 0.0);
  /// Phase `step` on cells with odd floor((x-ox)/cell) + floor((y-oy)/cell).
  static PhaseMask checkerboard(double cell, double step, double offset_x = 0.0,
                                double offset_y = 0.0);
  static PhaseMask raster(PhaseRaster data);
  /// Grey levels v in [0, 255] mapped to phi_max * v / 255.
  static PhaseMask from_levels(int nx, int ny, std::vector<std::uint8_t> levels, double pitch,
                               double center_x, double center_y, double phi_max);

  double phase(double x, double y) const;
  double phase_polar(double rho, double phi) const;

  MaskKind kind() const { return kind_; }
  const PhaseRaster *raster_data() const { return kind_ == MaskKind::Raster ? &raster_ : nullptr; }
  /// Short descriptor used in metadata, e.g. "sector(fraction=0.25,step=3.14159,start=0)".
  std::string describe() const;
  /// True when Phi(x, y) == Phi(x, -y) everywhere.
  bool mirror_symmetric() const;

private:
  PhaseMask() = default;
  double raster_phase(double x, double y) const;

  MaskKind kind_ = MaskKind::Uniform;
  double step_ = 0.0;
  double fraction_ = 0.0;
  double start_ = 0.0;
  double cell_ = 0.0;
  double offset_x_ = 0.0;
  double offset_y_ = 0.0;
  PhaseRaster raster_;
};

} // namespace vhom
