#include <vhom/hom_engine.hpp>
#include <vhom/imaging.hpp>
#include <vhom/kernels.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace vhom;

namespace {

Execution mode(const benchmark::State &state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State &state) { state.SetLabel(state.range(0) == 0 ? "serial" : "parallel"); }

// Coincidence image of the default 50x50 sensor, sector mask, m = 1.
void BM_coincidence_image(benchmark::State &state) {
  const SensorGrid grid{};
  const ImagingScene scene(TwistedMode(BesselGaussEnvelope::reference(), 1),
                           PhaseMask::sector(0.25, kPi), default_window(grid));
  for (auto _ : state)
    benchmark::DoNotOptimize(coincidence_port_d(scene, grid, mode(state)));
  label(state);
}
BENCHMARK(BM_coincidence_image)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Bare render loop with a cheap integrand, s = 8.
void BM_render_pixels(benchmark::State &state) {
  SensorGrid grid{};
  grid.subsamples = 8;
  const auto f = [](double x, double y) { return std::exp(-1e8 * (x * x + y * y)) * std::cos(3e4 * x); };
  for (auto _ : state)
    benchmark::DoNotOptimize(render_pixels(grid, f, mode(state)));
  label(state);
}
BENCHMARK(BM_render_pixels)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_pair_sums(benchmark::State &state) {
  const int n = static_cast<int>(state.range(1));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<Complex> a(n), b(n);
  std::vector<double> w(n);
  std::vector<int> mirror(n);
  for (int i = 0; i < n; ++i) {
    a[i] = {g(rng), g(rng)};
    b[i] = {g(rng), g(rng)};
    w[i] = std::abs(g(rng));
    mirror[i] = n - 1 - i;
  }
  for (auto _ : state)
    benchmark::DoNotOptimize(pair_sums(a, b, w, mirror, mode(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(n) * n);
  label(state);
}
BENCHMARK(BM_pair_sums)
    ->ArgsProduct({{0, 1}, {1024, 4096}})
    ->Unit(benchmark::kMillisecond);

// Masked HOM probabilities at the resolution used for image totals.
void BM_masked_probabilities(benchmark::State &state) {
  const TransverseProfile profile(TwistedMode(BesselGaussEnvelope::reference(), 1), 1.8e-4);
  const auto mask = PhaseMask::checkerboard(60e-6, kPi, 30e-6, 30e-6);
  for (auto _ : state)
    benchmark::DoNotOptimize(hom_probabilities_masked(profile, mask, 64, 128, mode(state)));
  label(state);
}
BENCHMARK(BM_masked_probabilities)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
