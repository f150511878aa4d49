#pragma once
#include <vhom/imaging.hpp>

#include <filesystem>
#include <string>

namespace vhom {

enum class ImageFormat { Csv, Pgm };

/// Linear grey-scale mapping used for a PGM export.
struct PgmScale {
  double min = 0.0;
  double max = 0.0;
};

/// CSV with the top row (largest y) first, 9 significant digits, invalid
/// pixels as the token `invalid`.
std::string format_csv(const ScalarImage &image);

/// P2 export with valid values mapped linearly from [min, max] onto 0..255.
/// Invalid pixels are written as 0. A constant image maps to all zeros.
std::string format_pgm(const ScalarImage &image, PgmScale &scale);

/// key=value sidecar for a PGM export: state, m, mask, window, floor,
/// scale_min, scale_max, I1_re, I1_im, I2_re, I2_im, then the remaining
/// metadata keys in sorted order, then version.
std::string format_meta(const ScalarImage &image, const PgmScale &scale);

/// Writes `stem`.csv, or `stem`.pgm plus `stem`.meta.txt.
/// Throws FormatError on I/O failure.
void write_image(const ScalarImage &image, const std::filesystem::path &stem, ImageFormat format);

} // namespace vhom
