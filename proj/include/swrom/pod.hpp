#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "swrom/avf.hpp"
#include "swrom/grid.hpp"
#include "swrom/model.hpp"
#include "swrom/svd.hpp"

namespace swrom {

// Mean-centered snapshot matrices, one per solution component. The mean is
// taken over every stored state (initial state included); the columns are the
// centered states after the initial one, so a trajectory with T+1 stored
// states yields T columns.
struct SnapshotSet {
  Eigen::MatrixXd s_u, s_v, s_h;
  Vec mean_u, mean_v, mean_h;

  Eigen::Index grid_size() const { return mean_u.size(); }
  Eigen::Index count() const { return s_u.cols(); }
};

SnapshotSet assemble_snapshots(const std::vector<Vec>& states);
SnapshotSet assemble_snapshots(const Trajectory& traj);
// Same construction from the initial flat state plus per-component matrices
// whose columns are the stored states after the initial one. Produces
// bit-identical results to the state-vector overload.
SnapshotSet assemble_snapshots(const Vec& initial, const Eigen::MatrixXd& u,
                               const Eigen::MatrixXd& v, const Eigen::MatrixXd& h);

// Smallest p with (sum of the first p squared singular values) / (total)
// strictly above 1 - kappa. sigma must be nonincreasing and not all zero.
int select_mode_count(const Vec& sigma, double kappa);

// How many modes to keep: either a fixed count or an energy cutoff applied
// per component (the shared count is the max over components).
struct ModeSelection {
  std::optional<int> fixed;
  double kappa = 1e-3;

  static ModeSelection count(int n) { return {n, 0.0}; }
  static ModeSelection energy(double kappa) { return {std::nullopt, kappa}; }
};

// Orthonormal basis of `n_modes` columns per component plus the snapshot
// means and the full singular value lists of the snapshot matrices.
struct PodBasis {
  Eigen::MatrixXd v_u, v_v, v_h;
  Vec sigma_u, sigma_v, sigma_h;
  Vec mean_u, mean_v, mean_h;
  int n_modes = 0;

  Eigen::Index grid_size() const { return v_u.rows(); }
};

PodBasis compute_pod_basis(const SnapshotSet& snaps, const ModeSelection& select);

// Reduced state -> full state (mean + V z_r per component) and its adjoint.
Vec lift(const PodBasis& basis, const Eigen::Ref<const Vec>& z_r);
Vec project(const PodBasis& basis, const Eigen::Ref<const Vec>& z_full);

// Precomputed reduced operators. The A blocks are the projected derivative
// operators; k_uv and k_vu hold, column k, the outer-product row
// kron(v_v(k,:), v_u(k,:)) resp. kron(v_u(k,:), v_v(k,:)), so that for a
// pointwise weight q the reduced vorticity block is the n x n reshape of
// K * q. Stored that way the contraction over the grid is a single
// matrix-vector product through contiguous memory.
struct ReducedOperators {
  Eigen::MatrixXd a_uh, a_vh, a_hu, a_hv;
  Eigen::MatrixXd k_uv, k_vu;

  Eigen::Index modes() const { return a_uh.rows(); }
};

ReducedOperators build_reduced_operators(const PodBasis& basis,
                                         const DiffOperators& ops);

// B_uv = V_u^T diag(q) V_v and B_vu = V_v^T diag(q) V_u via the K gathers.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> project_vorticity_blocks(
    const ReducedOperators& red, const Eigen::Ref<const Vec>& q);

// Dense reduced structure matrix at weight q; skew-symmetric by construction.
Eigen::MatrixXd assemble_reduced_poisson(const ReducedOperators& red,
                                         const Eigen::Ref<const Vec>& q);

// Reduced-order model preserving the skew-gradient form: the reduced
// Hamiltonian gradient is the projected full gradient at the lifted state and
// the reduced structure matrix is V^T J(lift(z_r)) V applied blockwise.
class PodRomSystem final : public SkewGradientSystem {
 public:
  PodRomSystem(Grid grid, DiffOperators ops, PhysParams params, PodBasis basis,
               ReducedOperators red);

  Eigen::Index dimension() const override { return 3 * basis_.n_modes; }
  void gradient(const Eigen::Ref<const Vec>& z_r, Vec& out) const override;
  void apply_skew(const Eigen::Ref<const Vec>& z_r_mid, const Vec& g,
                  Vec& out) const override;

  // Conserved quantities of the lifted state.
  ConservedQuantities conserved(const Eigen::Ref<const Vec>& z_r) const;

  const Grid& grid() const { return grid_; }
  const PodBasis& basis() const { return basis_; }
  const ReducedOperators& reduced_ops() const { return red_; }
  const PhysParams& params() const { return params_; }

 private:
  Grid grid_;
  DiffOperators ops_;
  PhysParams params_;
  PodBasis basis_;
  ReducedOperators red_;
};

// J_r(z_r) * (V^T grad H)(z_r), the reduced time derivative at z_r.
Vec reduced_rhs_pod(const PodRomSystem& sys, const Eigen::Ref<const Vec>& z_r);

}  // namespace swrom
