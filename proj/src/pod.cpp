#include "swrom/pod.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace swrom {

namespace {

void check_component_sizes(const SnapshotSet& snaps) {
  const Eigen::Index n = snaps.mean_u.size();
  const Eigen::Index cols = snaps.s_u.cols();
  const bool ok = snaps.mean_v.size() == n && snaps.mean_h.size() == n &&
                  snaps.s_u.rows() == n && snaps.s_v.rows() == n && snaps.s_h.rows() == n &&
                  snaps.s_v.cols() == cols && snaps.s_h.cols() == cols;
  if (!ok) throw std::invalid_argument("SnapshotSet: inconsistent component sizes");
}

}  // namespace

SnapshotSet assemble_snapshots(const std::vector<Vec>& states) {
  if (states.size() < 2)
    throw std::invalid_argument("assemble_snapshots: need at least 2 stored states");
  const Eigen::Index dim = states.front().size();
  if (dim <= 0 || dim % 3 != 0)
    throw std::invalid_argument("assemble_snapshots: state length must be a positive multiple of 3");
  for (const Vec& z : states)
    if (z.size() != dim)
      throw std::invalid_argument("assemble_snapshots: stored states differ in length");

  const Eigen::Index n = dim / 3;
  const Eigen::Index count = static_cast<Eigen::Index>(states.size()) - 1;

  Vec mean = Vec::Zero(dim);
  for (const Vec& z : states) mean += z;
  mean /= static_cast<double>(states.size());

  SnapshotSet out;
  out.mean_u = mean.head(n);
  out.mean_v = mean.segment(n, n);
  out.mean_h = mean.tail(n);
  out.s_u.resize(n, count);
  out.s_v.resize(n, count);
  out.s_h.resize(n, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const Vec& z = states[static_cast<std::size_t>(k) + 1];
    out.s_u.col(k) = z.head(n) - out.mean_u;
    out.s_v.col(k) = z.segment(n, n) - out.mean_v;
    out.s_h.col(k) = z.tail(n) - out.mean_h;
  }
  return out;
}

SnapshotSet assemble_snapshots(const Trajectory& traj) {
  return assemble_snapshots(traj.states);
}

SnapshotSet assemble_snapshots(const Vec& initial, const Eigen::MatrixXd& u,
                               const Eigen::MatrixXd& v, const Eigen::MatrixXd& h) {
  const Eigen::Index n = u.rows();
  const Eigen::Index count = u.cols();
  if (count < 1)
    throw std::invalid_argument("assemble_snapshots: need at least 2 stored states");
  if (initial.size() != 3 * n || v.rows() != n || h.rows() != n || v.cols() != count ||
      h.cols() != count)
    throw std::invalid_argument("assemble_snapshots: component shapes disagree");

  SnapshotSet out;
  // Accumulate the mean in stored-state order (initial first, then columns)
  // so the result matches the state-vector overload bit for bit.
  out.mean_u = initial.head(n);
  out.mean_v = initial.segment(n, n);
  out.mean_h = initial.tail(n);
  for (Eigen::Index k = 0; k < count; ++k) {
    out.mean_u += u.col(k);
    out.mean_v += v.col(k);
    out.mean_h += h.col(k);
  }
  out.mean_u /= static_cast<double>(count + 1);
  out.mean_v /= static_cast<double>(count + 1);
  out.mean_h /= static_cast<double>(count + 1);

  out.s_u = u.colwise() - out.mean_u;
  out.s_v = v.colwise() - out.mean_v;
  out.s_h = h.colwise() - out.mean_h;
  return out;
}

int select_mode_count(const Vec& sigma, double kappa) {
  if (sigma.size() == 0)
    throw std::invalid_argument("select_mode_count: empty singular value list");
  if (!(kappa > 0.0 && kappa < 1.0))
    throw std::invalid_argument("select_mode_count: kappa must lie in (0, 1)");

  double total = 0.0;
  for (Eigen::Index j = 0; j < sigma.size(); ++j) {
    if (sigma[j] < 0.0 || (j > 0 && sigma[j] > sigma[j - 1] * (1.0 + 1e-12)))
      throw std::invalid_argument("select_mode_count: singular values must be nonnegative and nonincreasing");
    total += sigma[j] * sigma[j];
  }
  if (total <= 0.0)
    throw std::invalid_argument("select_mode_count: all singular values are zero");

  const double threshold = 1.0 - kappa;
  double partial = 0.0;
  for (Eigen::Index j = 0; j < sigma.size(); ++j) {
    partial += sigma[j] * sigma[j];
    if (partial / total > threshold) return static_cast<int>(j) + 1;
  }
  return static_cast<int>(sigma.size());
}

PodBasis compute_pod_basis(const SnapshotSet& snaps, const ModeSelection& select) {
  check_component_sizes(snaps);
  if (snaps.count() == 0)
    throw std::invalid_argument("compute_pod_basis: snapshot set has no columns");

  const SvdFactors fu = svd_factors(snaps.s_u);
  const SvdFactors fv = svd_factors(snaps.s_v);
  const SvdFactors fh = svd_factors(snaps.s_h);

  int n = 0;
  if (select.fixed) {
    n = *select.fixed;
    if (n < 1) throw std::invalid_argument("compute_pod_basis: mode count must be positive");
  } else {
    n = std::max({select_mode_count(fu.sigma, select.kappa),
                  select_mode_count(fv.sigma, select.kappa),
                  select_mode_count(fh.sigma, select.kappa)});
  }

  PodBasis basis;
  basis.v_u = leading_left_vectors(snaps.s_u, fu, n);
  basis.v_v = leading_left_vectors(snaps.s_v, fv, n);
  basis.v_h = leading_left_vectors(snaps.s_h, fh, n);
  basis.sigma_u = fu.sigma;
  basis.sigma_v = fv.sigma;
  basis.sigma_h = fh.sigma;
  basis.mean_u = snaps.mean_u;
  basis.mean_v = snaps.mean_v;
  basis.mean_h = snaps.mean_h;
  basis.n_modes = n;
  return basis;
}

Vec lift(const PodBasis& basis, const Eigen::Ref<const Vec>& z_r) {
  const Eigen::Index big = basis.grid_size();
  const Eigen::Index n = basis.n_modes;
  if (z_r.size() != 3 * n)
    throw std::invalid_argument("lift: reduced state length " + std::to_string(z_r.size()) +
                                " does not match 3 * " + std::to_string(n));
  Vec z(3 * big);
  z.head(big) = basis.mean_u;
  z.head(big).noalias() += basis.v_u * z_r.head(n);
  z.segment(big, big) = basis.mean_v;
  z.segment(big, big).noalias() += basis.v_v * z_r.segment(n, n);
  z.tail(big) = basis.mean_h;
  z.tail(big).noalias() += basis.v_h * z_r.tail(n);
  return z;
}

Vec project(const PodBasis& basis, const Eigen::Ref<const Vec>& z_full) {
  const Eigen::Index big = basis.grid_size();
  const Eigen::Index n = basis.n_modes;
  if (z_full.size() != 3 * big)
    throw std::invalid_argument("project: full state length " + std::to_string(z_full.size()) +
                                " does not match 3 * " + std::to_string(big));
  Vec out(3 * n);
  out.head(n).noalias() = basis.v_u.transpose() * (z_full.head(big) - basis.mean_u);
  out.segment(n, n).noalias() = basis.v_v.transpose() * (z_full.segment(big, big) - basis.mean_v);
  out.tail(n).noalias() = basis.v_h.transpose() * (z_full.tail(big) - basis.mean_h);
  return out;
}

ReducedOperators build_reduced_operators(const PodBasis& basis, const DiffOperators& ops) {
  const Eigen::Index big = basis.grid_size();
  const Eigen::Index n = basis.n_modes;
  if (ops.Dx.rows() != big || ops.Dy.rows() != big)
    throw std::invalid_argument("build_reduced_operators: operator size does not match basis rows");

  ReducedOperators red;
  red.a_uh.noalias() = basis.v_u.transpose() * (ops.Dx * basis.v_h);
  red.a_vh.noalias() = basis.v_v.transpose() * (ops.Dy * basis.v_h);
  red.a_hu.noalias() = basis.v_h.transpose() * (ops.Dx * basis.v_u);
  red.a_hv.noalias() = basis.v_h.transpose() * (ops.Dy * basis.v_v);

  red.k_uv.resize(n * n, big);
  red.k_vu.resize(n * n, big);
  Vec row_u(n), row_v(n);
  for (Eigen::Index i = 0; i < big; ++i) {
    row_u = basis.v_u.row(i);
    row_v = basis.v_v.row(i);
    double* cu = red.k_uv.col(i).data();
    double* cv = red.k_vu.col(i).data();
    for (Eigen::Index j = 0; j < n; ++j) {
      const double uj = row_u[j];
      const double vj = row_v[j];
      for (Eigen::Index l = 0; l < n; ++l) {
        // The two gathers store the same pointwise products in transposed
        // row order, so the assembled blocks are exact transposes of each
        // other in floating point, not just up to roundoff.
        cu[j * n + l] = row_u[l] * vj;
        cv[j * n + l] = row_v[l] * uj;
      }
    }
  }
  return red;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> project_vorticity_blocks(
    const ReducedOperators& red, const Eigen::Ref<const Vec>& q) {
  const Eigen::Index n = red.modes();
  if (q.size() != red.k_uv.cols())
    throw std::invalid_argument("project_vorticity_blocks: weight length does not match gather columns");
  const Vec buv_flat = red.k_uv * q;
  const Vec bvu_flat = red.k_vu * q;
  using ConstMap = Eigen::Map<const Eigen::MatrixXd>;
  return {Eigen::MatrixXd(ConstMap(buv_flat.data(), n, n)),
          Eigen::MatrixXd(ConstMap(bvu_flat.data(), n, n))};
}

Eigen::MatrixXd assemble_reduced_poisson(const ReducedOperators& red,
                                         const Eigen::Ref<const Vec>& q) {
  const Eigen::Index n = red.modes();
  const auto [buv, bvu] = project_vorticity_blocks(red, q);
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(3 * n, 3 * n);
  j.block(0, n, n, n) = buv;
  j.block(n, 0, n, n) = -bvu;
  j.block(0, 2 * n, n, n) = -red.a_uh;
  j.block(2 * n, 0, n, n) = red.a_uh.transpose();
  j.block(n, 2 * n, n, n) = -red.a_vh;
  j.block(2 * n, n, n, n) = red.a_vh.transpose();
  return j;
}

PodRomSystem::PodRomSystem(Grid grid, DiffOperators ops, PhysParams params, PodBasis basis,
                           ReducedOperators red)
    : grid_(grid),
      ops_(std::move(ops)),
      params_(std::move(params)),
      basis_(std::move(basis)),
      red_(std::move(red)) {
  const Eigen::Index big = grid_.n;
  const Eigen::Index n = basis_.n_modes;
  if (n < 1) throw std::invalid_argument("PodRomSystem: basis holds no modes");
  if (basis_.grid_size() != big)
    throw std::invalid_argument("PodRomSystem: basis rows do not match grid size");
  if (basis_.v_u.cols() != n || basis_.v_v.cols() != n || basis_.v_h.cols() != n)
    throw std::invalid_argument("PodRomSystem: basis column counts disagree with n_modes");
  if (basis_.mean_u.size() != big || basis_.mean_v.size() != big || basis_.mean_h.size() != big)
    throw std::invalid_argument("PodRomSystem: mean lengths do not match grid size");
  if (red_.modes() != n || red_.k_uv.cols() != big || red_.k_vu.cols() != big)
    throw std::invalid_argument("PodRomSystem: reduced operators do not match basis");
  if (ops_.Dx.rows() != big || ops_.Dy.rows() != big)
    throw std::invalid_argument("PodRomSystem: derivative operators do not match grid");
  if (params_.h_b.size() != 0 && params_.h_b.size() != big)
    throw std::invalid_argument("PodRomSystem: bottom profile length does not match grid");
}

void PodRomSystem::gradient(const Eigen::Ref<const Vec>& z_r, Vec& out) const {
  const Eigen::Index big = grid_.n;
  const Eigen::Index n = basis_.n_modes;
  const Vec z_full = lift(basis_, z_r);
  Vec f;
  kernels::gradient(z_full, params_, f);
  out.resize(3 * n);
  // Chain rule through the affine lift: the mean term has zero derivative,
  // so the reduced gradient is the plain basis transpose of the full one.
  out.head(n).noalias() = basis_.v_u.transpose() * f.head(big);
  out.segment(n, n).noalias() = basis_.v_v.transpose() * f.segment(big, big);
  out.tail(n).noalias() = basis_.v_h.transpose() * f.tail(big);
}

void PodRomSystem::apply_skew(const Eigen::Ref<const Vec>& z_r_mid, const Vec& g,
                              Vec& out) const {
  const Eigen::Index n = basis_.n_modes;
  if (z_r_mid.size() != 3 * n || g.size() != 3 * n)
    throw std::invalid_argument("PodRomSystem::apply_skew: argument length mismatch");

  const Vec z_full = lift(basis_, z_r_mid);
  Vec q;
  kernels::vorticity(z_full, ops_, params_, q);
  const auto [buv, bvu] = project_vorticity_blocks(red_, q);

  const auto g1 = g.head(n);
  const auto g2 = g.segment(n, n);
  const auto g3 = g.tail(n);
  out.resize(3 * n);
  out.head(n).noalias() = buv * g2;
  out.head(n).noalias() -= red_.a_uh * g3;
  out.segment(n, n).noalias() = bvu * g1;
  out.segment(n, n) *= -1.0;
  out.segment(n, n).noalias() -= red_.a_vh * g3;
  // Bottom row uses the transposes of the stored top-row blocks so the
  // reduced structure operator stays skew-symmetric to the last bit.
  out.tail(n).noalias() = red_.a_uh.transpose() * g1;
  out.tail(n).noalias() += red_.a_vh.transpose() * g2;
}

ConservedQuantities PodRomSystem::conserved(const Eigen::Ref<const Vec>& z_r) const {
  const Vec z_full = lift(basis_, z_r);
  return conserved_quantities(from_flat(z_full), grid_, ops_, params_);
}

Vec reduced_rhs_pod(const PodRomSystem& sys, const Eigen::Ref<const Vec>& z_r) {
  Vec g;
  sys.gradient(z_r, g);
  Vec out;
  sys.apply_skew(z_r, g, out);
  return out;
}

}  // namespace swrom
