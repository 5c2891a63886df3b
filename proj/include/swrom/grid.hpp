#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace swrom {

// Uniform doubly periodic grid on [a,b] x [c,d]. Nodes are
// x_i = a + i*dx (i = 0..nx-1), y_j = c + j*dy; the right/top boundary
// nodes coincide with the left/bottom ones and are not stored.
// The global index runs in x-blocks of ny y-nodes: node(ix,iy) = ix*ny + iy.
struct Grid {
  double a = 0.0, b = 1.0, c = 0.0, d = 1.0;
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;
  int n = 0;  // nx*ny

  double x(int ix) const { return a + ix * dx; }
  double y(int iy) const { return c + iy * dy; }
  int node(int ix, int iy) const { return ix * ny + iy; }
  int x_index(int node) const { return node / ny; }
  int y_index(int node) const { return node % ny; }
  double cell_area() const { return dx * dy; }

  // Periodic stencil neighbors of a node along each axis.
  int east(int node) const { return ((x_index(node) + 1) % nx) * ny + y_index(node); }
  int west(int node) const { return ((x_index(node) + nx - 1) % nx) * ny + y_index(node); }
  int north(int node) const { return x_index(node) * ny + (y_index(node) + 1) % ny; }
  int south(int node) const { return x_index(node) * ny + (y_index(node) + ny - 1) % ny; }
};

// Validates bounds and node counts (nx, ny >= 3 so the periodic stencil has
// distinct neighbors). Throws std::invalid_argument.
Grid make_grid(double a, double b, double c, double d, int nx, int ny);

// Skew-symmetric periodic central-difference generator of size s:
// +1 on the superdiagonal, -1 on the subdiagonal, wrap entries
// [0,s-1] = -1 and [s-1,0] = +1 (zero-based). Row and column sums vanish.
Eigen::SparseMatrix<double> periodic_diff_matrix(int s);

// First-derivative operators on the flattened grid:
//   Dx = (1/(2 dx)) Dtilde_nx (x) I_ny,   Dy = (1/(2 dy)) I_nx (x) Dtilde_ny,
// both exactly skew-symmetric and commuting.
struct DiffOperators {
  Eigen::SparseMatrix<double> Dx;
  Eigen::SparseMatrix<double> Dy;
};

DiffOperators build_diff_ops(const Grid& grid);

}  // namespace swrom
