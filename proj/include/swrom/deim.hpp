#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "swrom/avf.hpp"
#include "swrom/grid.hpp"
#include "swrom/model.hpp"
#include "swrom/ntswe_system.hpp"
#include "swrom/pod.hpp"

namespace swrom {

// Raw right-hand-side snapshots, one block per equation. Column k holds the
// composite time derivative evaluated at stored state k+1, mirroring the
// column convention of the solution snapshots (the initial state is skipped).
struct NonlinearitySnapshots {
  Eigen::MatrixXd g1, g2, g3;

  Eigen::Index grid_size() const { return g1.rows(); }
  Eigen::Index count() const { return g1.cols(); }
};

NonlinearitySnapshots collect_nonlinearity_snapshots(const NtsweSystem& sys,
                                                     const std::vector<Vec>& states);
NonlinearitySnapshots collect_nonlinearity_snapshots(const NtsweSystem& sys,
                                                     const Trajectory& traj);

// Greedy interpolation point selection: the first point is the largest
// magnitude entry of the first basis vector, each later point the largest
// magnitude entry of the residual of the next vector after interpolating it
// at the points picked so far. Ties resolve to the smallest index; indices
// are zero-based rows of v_f.
std::vector<int> deim_select_points(const Eigen::MatrixXd& v_f);

// One equation's interpolation data: the nonlinearity basis, its
// interpolation points, the precomputed projector V_w^T V_F (P^T V_F)^{-1},
// and the condition number of the interpolation matrix P^T V_F.
struct DeimComponent {
  Eigen::MatrixXd basis;
  std::vector<int> points;
  Eigen::MatrixXd projector;
  double condition_number = 0.0;
};

struct DeimOperator {
  DeimComponent c1, c2, c3;
  Vec sigma_1, sigma_2, sigma_3;
  int m_modes = 0;
};

// Builds the three interpolation components from right-hand-side snapshots.
// The shared mode count is either select.fixed or the max over equations of
// the energy criterion applied to each snapshot block's singular values.
DeimOperator build_deim_operator(const PodBasis& basis, const NonlinearitySnapshots& snaps,
                                 const ModeSelection& select);

// Assembles projectors and condition numbers for explicitly given bases and
// points. Meant for tests and diagnostics where the greedy selection and the
// snapshot truncation are supplied by hand.
DeimOperator make_deim_operator(const PodBasis& basis,
                                const std::array<Eigen::MatrixXd, 3>& bases,
                                const std::array<std::vector<int>, 3>& points);

// Reduced model whose right-hand side samples the full nonlinear terms only
// at the interpolation points. Each evaluation lifts the reduced state on the
// union of the five-point stencils of all interpolation points, forms the
// sampled equation rows there, and applies the precomputed projectors, so
// the cost scales with the number of points rather than the grid size.
class DeimRomSystem final : public RhsSystem {
 public:
  DeimRomSystem(Grid grid, PhysParams params, PodBasis basis, DeimOperator deim);

  Eigen::Index dimension() const override { return 3 * basis_.n_modes; }
  void rhs(const Eigen::Ref<const Vec>& z_r, Vec& out) const override;

  const Grid& grid() const { return grid_; }
  const PodBasis& basis() const { return basis_; }
  const DeimOperator& deim() const { return deim_; }
  // Sorted global node indices this system reads when evaluating the
  // right-hand side.
  const std::vector<int>& gathered_rows() const { return rows_; }

 private:
  struct Stencil {
    std::vector<int> self, xp, xm, yp, ym;
  };

  Grid grid_;
  PhysParams params_;
  PodBasis basis_;
  DeimOperator deim_;

  std::vector<int> rows_;
  Eigen::MatrixXd vu_rows_, vv_rows_, vh_rows_;
  Vec mean_u_rows_, mean_v_rows_, mean_h_rows_, h_b_rows_;
  std::array<Stencil, 3> stencils_;
  double inv_2dx_ = 0.0;
  double inv_2dy_ = 0.0;
};

Vec reduced_rhs_deim(const DeimRomSystem& sys, const Eigen::Ref<const Vec>& z_r);

}  // namespace swrom
