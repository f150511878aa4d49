#include <vhom/errors.hpp>
#include <vhom/kernels.hpp>

#include <cmath>

namespace vhom {

void SensorGrid::validate() const {
  if (nx < 1 || ny < 1)
    throw DomainError("sensor: nx and ny must be at least 1");
  if (!(pitch > 0.0) || !std::isfinite(pitch))
    throw DomainError("sensor: pitch must be positive");
  if (subsamples < 1)
    throw DomainError("sensor: subsamples must be at least 1");
  if (!std::isfinite(center_x) || !std::isfinite(center_y))
    throw DomainError("sensor: center must be finite");
}

double SensorGrid::half_diagonal() const {
  return 0.5 * pitch * std::hypot(static_cast<double>(nx), static_cast<double>(ny));
}

namespace {

PairSums pair_row(const std::vector<Complex> &a, const std::vector<Complex> &b,
                  const std::vector<double> &w, const std::vector<int> &mirror, std::size_t p) {
  const std::size_t n = a.size();
  const std::size_t pb = mirror[p];
  PairSums row;
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t qb = mirror[q];
    const double wq = w[q];
    const Complex xi = a[p] * b[q];
    row.cc += wq * std::conj(a[pb] * b[q]) * (a[qb] * b[p]);
    row.dd += wq * std::conj(a[p] * b[qb]) * (a[q] * b[pb]);
    row.cd += wq * std::conj(xi) * (a[qb] * b[pb]);
    row.norm += wq * std::norm(xi);
  }
  row.cc *= w[p];
  row.dd *= w[p];
  row.cd *= w[p];
  row.norm *= w[p];
  return row;
}

} // namespace

PairSums pair_sums(const std::vector<Complex> &a, const std::vector<Complex> &b,
                   const std::vector<double> &w, const std::vector<int> &mirror, Execution exec) {
  const std::size_t n = a.size();
  if (b.size() != n || w.size() != n || mirror.size() != n)
    throw ContractError("pair_sums: node arrays differ in length");
  for (int m : mirror)
    if (m < 0 || static_cast<std::size_t>(m) >= n)
      throw ContractError("pair_sums: mirror index out of range");

  std::vector<PairSums> rows(n);
  const auto count = static_cast<long long>(n);
  if (exec == Execution::Serial) {
    for (long long p = 0; p < count; ++p)
      rows[p] = pair_row(a, b, w, mirror, p);
  } else {
#pragma omp parallel for schedule(dynamic, 16)
    for (long long p = 0; p < count; ++p)
      rows[p] = pair_row(a, b, w, mirror, p);
  }

  PairSums total;
  for (const auto &r : rows) {
    total.cc += r.cc;
    total.dd += r.dd;
    total.cd += r.cd;
    total.norm += r.norm;
  }
  return total;
}

} // namespace vhom
