#include <vhom/core_math.hpp>
#include <vhom/errors.hpp>
#include <vhom/phase_mask.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vhom {

namespace {

void require_finite(double v, const char *what) {
  if (!std::isfinite(v))
    throw DomainError(std::string("phase mask: ") + what + " must be finite");
}

} // namespace

PhaseMask PhaseMask::uniform(double phase) {
  require_finite(phase, "uniform phase");
  PhaseMask m;
  m.kind_ = MaskKind::Uniform;
  m.step_ = phase;
  return m;
}

PhaseMask PhaseMask::sector(double fraction, double step, double start) {
  require_finite(step, "sector step");
  require_finite(start, "sector start");
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw DomainError("phase mask: sector fraction must lie in [0, 1]");
  PhaseMask m;
  m.kind_ = MaskKind::Sector;
  m.fraction_ = fraction;
  m.step_ = step;
  m.start_ = start;
  return m;
}

PhaseMask PhaseMask::checkerboard(double cell, double step, double offset_x, double offset_y) {
  require_finite(step, "checkerboard step");
  require_finite(offset_x, "checkerboard offset");
  require_finite(offset_y, "checkerboard offset");
  if (!(cell > 0.0) || !std::isfinite(cell))
    throw DomainError("phase mask: checkerboard cell must be positive");
  PhaseMask m;
  m.kind_ = MaskKind::Checkerboard;
  m.cell_ = cell;
  m.step_ = step;
  m.offset_x_ = offset_x;
  m.offset_y_ = offset_y;
  return m;
}

PhaseMask PhaseMask::raster(PhaseRaster data) {
  if (data.nx < 1 || data.ny < 1)
    throw DomainError("phase mask: raster needs at least one node");
  if (data.phases.size() != static_cast<std::size_t>(data.nx) * data.ny)
    throw DomainError("phase mask: raster size does not match nx * ny");
  if (!(data.pitch > 0.0) || !std::isfinite(data.pitch))
    throw DomainError("phase mask: raster pitch must be positive");
  require_finite(data.center_x, "raster center");
  require_finite(data.center_y, "raster center");
  for (double p : data.phases)
    require_finite(p, "raster phase");
  PhaseMask m;
  m.kind_ = MaskKind::Raster;
  m.raster_ = std::move(data);
  return m;
}

PhaseMask PhaseMask::from_levels(int nx, int ny, std::vector<std::uint8_t> levels, double pitch,
                                 double center_x, double center_y, double phi_max) {
  require_finite(phi_max, "phi_max");
  PhaseRaster r;
  r.nx = nx;
  r.ny = ny;
  r.pitch = pitch;
  r.center_x = center_x;
  r.center_y = center_y;
  r.phi_max = phi_max;
  r.phases.reserve(levels.size());
  for (auto v : levels)
    r.phases.push_back(phi_max * v / 255.0);
  r.levels = std::move(levels);
  return raster(std::move(r));
}

double PhaseMask::raster_phase(double x, double y) const {
  const auto &r = raster_;
  const double u = (x - r.center_x) / r.pitch + 0.5 * (r.nx - 1);
  const double v = (y - r.center_y) / r.pitch + 0.5 * (r.ny - 1);
  if (u < -0.5 || u > r.nx - 0.5 || v < -0.5 || v > r.ny - 0.5)
    return 0.0;

  auto axis = [](double s, int n, int &i0, double &t) {
    if (n == 1) {
      i0 = 0;
      t = 0.0;
      return;
    }
    s = std::clamp(s, 0.0, static_cast<double>(n - 1));
    i0 = std::min(static_cast<int>(std::floor(s)), n - 2);
    t = s - i0;
  };
  int ix, iy;
  double tx, ty;
  axis(u, r.nx, ix, tx);
  axis(v, r.ny, iy, ty);
  const int ix1 = r.nx == 1 ? ix : ix + 1;
  const int iy1 = r.ny == 1 ? iy : iy + 1;
  const auto at = [&](int i, int j) { return r.phases[static_cast<std::size_t>(j) * r.nx + i]; };
  const double bottom = (1.0 - tx) * at(ix, iy) + tx * at(ix1, iy);
  const double top = (1.0 - tx) * at(ix, iy1) + tx * at(ix1, iy1);
  return (1.0 - ty) * bottom + ty * top;
}

double PhaseMask::phase(double x, double y) const {
  switch (kind_) {
  case MaskKind::Uniform:
    return step_;
  case MaskKind::Sector: {
    double a = std::atan2(y, x) - start_;
    a = std::fmod(a, kTwoPi);
    if (a < 0.0)
      a += kTwoPi;
    return a < kTwoPi * fraction_ ? step_ : 0.0;
  }
  case MaskKind::Checkerboard: {
    const auto cx = static_cast<long long>(std::floor((x - offset_x_) / cell_));
    const auto cy = static_cast<long long>(std::floor((y - offset_y_) / cell_));
    return ((cx + cy) % 2 != 0) ? step_ : 0.0;
  }
  case MaskKind::Raster:
    return raster_phase(x, y);
  }
  return 0.0;
}

double PhaseMask::phase_polar(double rho, double phi) const {
  return phase(rho * std::cos(phi), rho * std::sin(phi));
}

bool PhaseMask::mirror_symmetric() const {
  switch (kind_) {
  case MaskKind::Uniform:
    return true;
  case MaskKind::Sector: {
    if (fraction_ == 0.0 || fraction_ == 1.0 || step_ == 0.0)
      return true;
    // Wedge centred on the +x or -x axis.
    double centre = std::fmod(start_ + kPi * fraction_, kPi);
    return std::abs(centre) < 1e-15 || std::abs(centre - kPi) < 1e-15;
  }
  case MaskKind::Checkerboard:
    return step_ == 0.0;
  case MaskKind::Raster: {
    const auto &r = raster_;
    if (r.center_y != 0.0)
      return false;
    for (int j = 0; j < r.ny; ++j)
      for (int i = 0; i < r.nx; ++i)
        if (r.phases[static_cast<std::size_t>(j) * r.nx + i] !=
            r.phases[static_cast<std::size_t>(r.ny - 1 - j) * r.nx + i])
          return false;
    return true;
  }
  }
  return false;
}

std::string PhaseMask::describe() const {
  std::ostringstream os;
  os.precision(9);
  switch (kind_) {
  case MaskKind::Uniform:
    os << "uniform(phase=" << step_ << ")";
    break;
  case MaskKind::Sector:
    os << "sector(fraction=" << fraction_ << ",step=" << step_ << ",start=" << start_ << ")";
    break;
  case MaskKind::Checkerboard:
    os << "checkerboard(cell=" << cell_ << ",step=" << step_ << ",offset_x=" << offset_x_
       << ",offset_y=" << offset_y_ << ")";
    break;
  case MaskKind::Raster:
    os << "raster(nx=" << raster_.nx << ",ny=" << raster_.ny << ",pitch=" << raster_.pitch
       << ",center=" << raster_.center_x << ";" << raster_.center_y << ")";
    break;
  }
  return os.str();
}

} // namespace vhom
