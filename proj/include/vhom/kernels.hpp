#pragma once
#include <vhom/core_math.hpp>

#include <cstddef>
#include <vector>

namespace vhom {

/// Serial loops are the reference; Parallel spreads independent work items
/// over OpenMP threads. Both produce bit-identical results.
enum class Execution { Serial, Parallel };

/// Pixel geometry of the image sensor.
///
/// Pixel (ix, iy) covers x in [cx + (ix - nx/2) p, cx + (ix - nx/2 + 1) p]
/// and likewise in y, so iy = 0 is the lowest row. Each pixel is sampled at
/// subsamples x subsamples midpoints.
struct SensorGrid {
  int nx = 50;
  int ny = 50;
  double pitch = 10e-6;
  double center_x = 0.0;
  double center_y = 0.0;
  int subsamples = 4;

  /// Throws DomainError on non-positive sizes, pitch or subsamples.
  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  double pixel_left(int ix) const { return center_x + (ix - 0.5 * nx) * pitch; }
  double pixel_bottom(int iy) const { return center_y + (iy - 0.5 * ny) * pitch; }
  double half_diagonal() const;
  bool operator==(const SensorGrid &) const = default;
};

/// Integral of f(x, y) over pixel k = iy * nx + ix by midpoint subsampling.
template <class F> double pixel_integral(const SensorGrid &g, std::size_t k, const F &f) {
  const int ix = static_cast<int>(k % g.nx);
  const int iy = static_cast<int>(k / g.nx);
  const double step = g.pitch / g.subsamples;
  const double x0 = g.pixel_left(ix);
  const double y0 = g.pixel_bottom(iy);
  double sum = 0.0;
  for (int b = 0; b < g.subsamples; ++b) {
    const double y = y0 + (b + 0.5) * step;
    for (int a = 0; a < g.subsamples; ++a)
      sum += f(x0 + (a + 0.5) * step, y);
  }
  return sum * step * step;
}

/// Pixel-integrated image of f. Every pixel is an independent serial sum,
/// so the thread count cannot change a single bit of the output.
template <class F>
std::vector<double> render_pixels(const SensorGrid &g, const F &f,
                                  Execution exec = Execution::Parallel) {
  g.validate();
  std::vector<double> out(g.size());
  const auto n = static_cast<long long>(out.size());
  if (exec == Execution::Serial) {
    for (long long k = 0; k < n; ++k)
      out[k] = pixel_integral(g, static_cast<std::size_t>(k), f);
  } else {
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < n; ++k)
      out[k] = pixel_integral(g, static_cast<std::size_t>(k), f);
  }
  return out;
}

/// Bilinear forms of the real-space two-photon amplitude
/// xi(p, q) = a[p] b[q] on a polar node set with weights w and reflection
/// map mirror (node index of r-bar):
///   cc   = sum w_p w_q conj(xi(p-bar, q)) xi(q-bar, p)
///   dd   = sum w_p w_q conj(xi(p, q-bar)) xi(q, p-bar)
///   cd   = sum w_p w_q conj(xi(p, q)) xi(q-bar, p-bar)
///   norm = sum w_p w_q |xi(p, q)|^2
struct PairSums {
  Complex cc;
  Complex dd;
  Complex cd;
  double norm = 0.0;
};

/// Brute-force O(N^2) pair sum. Rows are accumulated independently and
/// added in index order, so Serial and Parallel agree bit for bit.
PairSums pair_sums(const std::vector<Complex> &a, const std::vector<Complex> &b,
                   const std::vector<double> &w, const std::vector<int> &mirror,
                   Execution exec = Execution::Parallel);

} // namespace vhom
