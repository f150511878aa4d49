#include <vhom/config.hpp>
#include <vhom/image_io.hpp>
#include <vhom/pgm.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace vhom {

namespace {

std::string number(double v, const char *fmt = "%.9g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

} // namespace

std::string format_csv(const ScalarImage &image) {
  const auto &g = image.grid;
  std::string out;
  out.reserve(g.size() * 16);
  for (int iy = g.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      if (ix > 0)
        out += ',';
      out += image.is_valid(ix, iy) ? number(image.at(ix, iy)) : "invalid";
    }
    out += '\n';
  }
  return out;
}

std::string format_pgm(const ScalarImage &image, PgmScale &scale) {
  const auto &g = image.grid;
  scale = {};
  if (image.valid_count() > 0) {
    scale.min = image.min_value();
    scale.max = image.max_value();
  }
  const double span = scale.max - scale.min;
  GrayImage gray;
  gray.width = g.nx;
  gray.height = g.ny;
  gray.pixels.resize(g.size());
  for (int row = 0; row < g.ny; ++row) {
    const int iy = g.ny - 1 - row;
    for (int ix = 0; ix < g.nx; ++ix) {
      double level = 0.0;
      if (image.is_valid(ix, iy) && span > 0.0)
        level = std::clamp(255.0 * (image.at(ix, iy) - scale.min) / span, 0.0, 255.0);
      gray.pixels[static_cast<std::size_t>(row) * g.nx + ix] =
          static_cast<std::uint8_t>(std::lround(level));
    }
  }
  return write_pgm(gray, false);
}

std::string format_meta(const ScalarImage &image, const PgmScale &scale) {
  auto get = [&image](const std::string &key) {
    auto it = image.metadata.find(key);
    return it == image.metadata.end() ? std::string("none") : it->second;
  };
  std::string out;
  auto line = [&out](const std::string &k, const std::string &v) { out += k + "=" + v + "\n"; };
  const std::set<std::string> fixed = {"state", "m",     "mask",  "window", "floor", "I1_re",
                                       "I1_im", "I2_re", "I2_im", "version"};
  for (const char *k : {"state", "m", "mask", "window", "floor"})
    line(k, get(k));
  line("scale_min", number(scale.min, "%.17g"));
  line("scale_max", number(scale.max, "%.17g"));
  for (const char *k : {"I1_re", "I1_im", "I2_re", "I2_im"})
    line(k, get(k));
  for (const auto &[k, v] : image.metadata)
    if (!fixed.count(k))
      line(k, v);
  line("version", kVersion);
  return out;
}

void write_image(const ScalarImage &image, const std::filesystem::path &stem, ImageFormat format) {
  auto with = [&stem](const char *ext) {
    auto p = stem;
    p += ext;
    return p;
  };
  if (format == ImageFormat::Csv) {
    write_file(with(".csv"), format_csv(image));
  } else {
    PgmScale scale;
    const auto pgm = format_pgm(image, scale);
    write_file(with(".pgm"), pgm);
    write_file(with(".meta.txt"), format_meta(image, scale));
  }
}

} // namespace vhom
