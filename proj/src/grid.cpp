#include "swrom/grid.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace swrom {

Grid make_grid(double a, double b, double c, double d, int nx, int ny) {
  if (!(b > a) || !(d > c))
    throw std::invalid_argument("make_grid: domain bounds must satisfy a < b and c < d");
  if (nx < 3 || ny < 3)
    throw std::invalid_argument("make_grid: nx and ny must be at least 3, got nx=" +
                                std::to_string(nx) + " ny=" + std::to_string(ny));
  Grid g;
  g.a = a;
  g.b = b;
  g.c = c;
  g.d = d;
  g.nx = nx;
  g.ny = ny;
  g.dx = (b - a) / nx;
  g.dy = (d - c) / ny;
  g.n = nx * ny;
  return g;
}

Eigen::SparseMatrix<double> periodic_diff_matrix(int s) {
  if (s < 3) throw std::invalid_argument("periodic_diff_matrix: size must be at least 3");
  Eigen::SparseMatrix<double> m(s, s);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(2 * s));
  for (int i = 0; i < s; ++i) {
    trips.emplace_back(i, (i + 1) % s, 1.0);
    trips.emplace_back(i, (i + s - 1) % s, -1.0);
  }
  m.setFromTriplets(trips.begin(), trips.end());
  m.makeCompressed();
  return m;
}

namespace {

// kron(A, I_k) and kron(I_k, A) assembled directly; A is sparse square.
Eigen::SparseMatrix<double> kron_with_identity_right(const Eigen::SparseMatrix<double>& a,
                                                     int k, double scale) {
  const int s = static_cast<int>(a.rows());
  Eigen::SparseMatrix<double> out(s * k, s * k);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros()) * k);
  for (int col = 0; col < s; ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it)
      for (int j = 0; j < k; ++j)
        trips.emplace_back(static_cast<int>(it.row()) * k + j, col * k + j,
                           scale * it.value());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

Eigen::SparseMatrix<double> kron_with_identity_left(const Eigen::SparseMatrix<double>& a,
                                                    int k, double scale) {
  const int s = static_cast<int>(a.rows());
  Eigen::SparseMatrix<double> out(k * s, k * s);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(a.nonZeros()) * k);
  for (int col = 0; col < s; ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, col); it; ++it)
      for (int j = 0; j < k; ++j)
        trips.emplace_back(j * s + static_cast<int>(it.row()), j * s + col,
                           scale * it.value());
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

}  // namespace

DiffOperators build_diff_ops(const Grid& grid) {
  DiffOperators ops;
  const auto dtx = periodic_diff_matrix(grid.nx);
  const auto dty = periodic_diff_matrix(grid.ny);
  ops.Dx = kron_with_identity_right(dtx, grid.ny, 1.0 / (2.0 * grid.dx));
  ops.Dy = kron_with_identity_left(dty, grid.nx, 1.0 / (2.0 * grid.dy));
  return ops;
}

}  // namespace swrom
