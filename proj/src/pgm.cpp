#include <vhom/core_math.hpp>
#include <vhom/errors.hpp>
#include <vhom/pgm.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vhom {

namespace {

class HeaderReader {
public:
  explicit HeaderReader(std::string_view bytes) : s_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < s_.size()) {
      if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n')
          ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long integer(const char *what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > 1'000'000'000)
        throw FormatError(std::string("pgm: ") + what + " too large");
      ++pos_;
    }
    if (pos_ == start)
      throw FormatError(std::string("pgm: expected ") + what);
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }
  std::size_t size() const { return s_.size(); }
  char at(std::size_t i) const { return s_[i]; }

private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

} // namespace

GrayImage read_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw FormatError("pgm: bad magic number (expected P2 or P5)");
  const bool binary = bytes[1] == '5';
  HeaderReader r(bytes);
  r.advance(2);
  GrayImage img;
  const long w = r.integer("width");
  const long h = r.integer("height");
  const long maxval = r.integer("maxval");
  if (w < 1 || h < 1 || w * h > 100'000'000)
    throw FormatError("pgm: bad dimensions");
  if (maxval < 1 || maxval > 255)
    throw FormatError("pgm: maxval must lie in [1, 255]");
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.maxval = static_cast<int>(maxval);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  img.pixels.resize(n);

  if (binary) {
    if (r.pos() >= r.size() || !std::isspace(static_cast<unsigned char>(r.at(r.pos()))))
      throw FormatError("pgm: missing whitespace after maxval");
    r.advance(1);
    if (r.size() - r.pos() < n)
      throw FormatError("pgm: truncated raster");
    for (std::size_t k = 0; k < n; ++k)
      img.pixels[k] = static_cast<std::uint8_t>(r.at(r.pos() + k));
  } else {
    for (std::size_t k = 0; k < n; ++k) {
      const long v = r.integer("pixel value");
      if (v > maxval)
        throw FormatError("pgm: pixel value exceeds maxval");
      img.pixels[k] = static_cast<std::uint8_t>(v);
    }
  }
  for (auto v : img.pixels)
    if (v > maxval)
      throw FormatError("pgm: pixel value exceeds maxval");
  return img;
}

std::string write_pgm(const GrayImage &image, bool binary) {
  if (image.width < 1 || image.height < 1 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
    throw ContractError("pgm: image size does not match its pixel count");
  std::ostringstream os;
  os << (binary ? "P5" : "P2") << '\n'
     << image.width << ' ' << image.height << '\n'
     << image.maxval << '\n';
  if (binary) {
    os.write(reinterpret_cast<const char *>(image.pixels.data()),
             static_cast<std::streamsize>(image.pixels.size()));
  } else {
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) {
        const auto v = image.pixels[static_cast<std::size_t>(y) * image.width + x];
        const bool wrap = x > 0 && x % 17 == 0;
        os << (x == 0 ? "" : (wrap ? "\n" : " ")) << static_cast<int>(v);
      }
      os << '\n';
    }
  }
  return os.str();
}

PhaseMask read_mask_pgm(std::string_view bytes, double pitch, double center_x, double center_y,
                        double phi_max) {
  const auto img = read_pgm(bytes);
  std::vector<std::uint8_t> levels(img.pixels.size());
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x) {
      int v = img.pixels[static_cast<std::size_t>(y) * img.width + x];
      if (img.maxval != 255)
        v = static_cast<int>(std::lround(255.0 * v / img.maxval));
      // File row 0 is the top; raster row 0 is the lowest y.
      const std::size_t row = static_cast<std::size_t>(img.height - 1 - y);
      levels[row * img.width + x] = static_cast<std::uint8_t>(v);
    }
  return PhaseMask::from_levels(img.width, img.height, std::move(levels), pitch, center_x,
                                center_y, phi_max);
}

std::string write_mask_pgm(const PhaseMask &mask) {
  const auto *r = mask.raster_data();
  if (r == nullptr)
    throw ContractError("write_mask_pgm: mask is not a raster");
  GrayImage img;
  img.width = r->nx;
  img.height = r->ny;
  img.pixels.resize(r->phases.size());
  for (int y = 0; y < r->ny; ++y)
    for (int x = 0; x < r->nx; ++x) {
      const std::size_t src = static_cast<std::size_t>(r->ny - 1 - y) * r->nx + x;
      std::uint8_t v;
      if (!r->levels.empty()) {
        v = r->levels[src];
      } else {
        const double q = r->phi_max != 0.0 ? 255.0 * r->phases[src] / r->phi_max : 0.0;
        v = static_cast<std::uint8_t>(std::clamp(std::lround(q), 0L, 255L));
      }
      img.pixels[static_cast<std::size_t>(y) * r->nx + x] = v;
    }
  return write_pgm(img, true);
}

GrayImage rasterize_mask(const PhaseMask &mask, const SensorGrid &grid, double phi_max) {
  grid.validate();
  if (!(phi_max > 0.0) || !std::isfinite(phi_max))
    throw DomainError("rasterize_mask: phi_max must be positive");
  GrayImage img;
  img.width = grid.nx;
  img.height = grid.ny;
  img.pixels.resize(grid.size());
  for (int row = 0; row < grid.ny; ++row) {
    const int iy = grid.ny - 1 - row;
    const double y = grid.pixel_bottom(iy) + 0.5 * grid.pitch;
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double x = grid.pixel_left(ix) + 0.5 * grid.pitch;
      double phase = std::fmod(mask.phase(x, y), kTwoPi);
      if (phase < 0.0)
        phase += kTwoPi;
      const double q = std::clamp(255.0 * phase / phi_max, 0.0, 255.0);
      img.pixels[static_cast<std::size_t>(row) * grid.nx + ix] =
          static_cast<std::uint8_t>(std::lround(q));
    }
  }
  return img;
}

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw FormatError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad())
    throw FormatError("error reading " + path.string());
  return os.str();
}

void write_file(const std::filesystem::path &path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw FormatError("cannot create " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out)
    throw FormatError("error writing " + path.string());
}

} // namespace vhom
