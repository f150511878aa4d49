#pragma once
#include <vhom/kernels.hpp>
#include <vhom/phase_mask.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace vhom {

/// 8-bit grey image in file order: row 0 is the top row.
struct GrayImage {
  int width = 0;
  int height = 0;
  int maxval = 255;
  std::vector<std::uint8_t> pixels;
};

/// Parses P2 (ASCII) or P5 (binary) with maxval <= 255. Header comments are
/// skipped. Throws FormatError on anything else.
GrayImage read_pgm(std::string_view bytes);

/// Serialises as P5 when `binary`, else P2 with at most 17 values per line.
std::string write_pgm(const GrayImage &image, bool binary);

/// Raster phase mask from PGM bytes. Levels are rescaled to 0..255 when
/// maxval < 255 and then mapped to phi_max * v / 255. The top file row
/// becomes the highest-y raster row.
PhaseMask read_mask_pgm(std::string_view bytes, double pitch, double center_x, double center_y,
                        double phi_max);

/// P5 bytes of a raster mask's 8-bit levels (quantised from the phases when
/// the raster has no stored levels). Throws ContractError for non-raster masks.
std::string write_mask_pgm(const PhaseMask &mask);

/// Samples any mask at the pixel centres of `grid` and quantises
/// wrap(Phi) / phi_max to 8 bits, giving a PGM-ready image.
GrayImage rasterize_mask(const PhaseMask &mask, const SensorGrid &grid, double phi_max);

/// Whole-file helpers; both throw FormatError on I/O failure.
std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view contents);

} // namespace vhom
