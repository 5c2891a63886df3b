#include "swrom/deim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace swrom {

namespace {

// Largest-magnitude entry, first index on ties.
Eigen::Index argmax_abs(const Vec& r) {
  Eigen::Index at = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const double a = std::abs(r[i]);
    if (a > best) {
      best = a;
      at = i;
    }
  }
  return at;
}

DeimComponent finish_component(const Eigen::MatrixXd& v_w, Eigen::MatrixXd basis,
                               std::vector<int> points, const char* label) {
  const Eigen::Index m = basis.cols();
  if (m == 0) throw std::invalid_argument(std::string(label) + ": empty interpolation basis");
  if (static_cast<Eigen::Index>(points.size()) != m)
    throw std::invalid_argument(std::string(label) + ": point count does not match basis columns");
  if (v_w.rows() != basis.rows())
    throw std::invalid_argument(std::string(label) + ": basis row count does not match projection basis");

  Eigen::MatrixXd pmat(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const int p = points[static_cast<std::size_t>(r)];
    if (p < 0 || p >= basis.rows())
      throw std::invalid_argument(std::string(label) + ": interpolation point out of range");
    pmat.row(r) = basis.row(p);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pmat);
  const double s_max = svd.singularValues()(0);
  const double s_min = svd.singularValues()(m - 1);
  if (!(s_min > 1e-14 * s_max))
    throw std::runtime_error(std::string(label) + ": interpolation matrix is numerically singular");

  DeimComponent c;
  c.condition_number = s_max / s_min;
  const Eigen::MatrixXd a = v_w.transpose() * basis;
  c.projector = pmat.transpose().partialPivLu().solve(a.transpose()).transpose();
  c.basis = std::move(basis);
  c.points = std::move(points);
  return c;
}

}  // namespace

NonlinearitySnapshots collect_nonlinearity_snapshots(const NtsweSystem& sys,
                                                     const std::vector<Vec>& states) {
  if (states.size() < 2)
    throw std::invalid_argument("collect_nonlinearity_snapshots: need at least 2 stored states");
  const Eigen::Index big = sys.grid().n;
  const Eigen::Index count = static_cast<Eigen::Index>(states.size()) - 1;

  NonlinearitySnapshots out;
  out.g1.resize(big, count);
  out.g2.resize(big, count);
  out.g3.resize(big, count);
  for (Eigen::Index k = 0; k < count; ++k) {
    const Vec rhs = sys.composite_rhs(states[static_cast<std::size_t>(k) + 1]);
    out.g1.col(k) = rhs.head(big);
    out.g2.col(k) = rhs.segment(big, big);
    out.g3.col(k) = rhs.tail(big);
  }
  return out;
}

NonlinearitySnapshots collect_nonlinearity_snapshots(const NtsweSystem& sys,
                                                     const Trajectory& traj) {
  return collect_nonlinearity_snapshots(sys, traj.states);
}

std::vector<int> deim_select_points(const Eigen::MatrixXd& v_f) {
  const Eigen::Index rows = v_f.rows();
  const Eigen::Index m = v_f.cols();
  if (rows == 0 || m == 0)
    throw std::invalid_argument("deim_select_points: empty basis");
  if (m > rows)
    throw std::invalid_argument("deim_select_points: more basis vectors than rows");

  std::vector<int> points;
  points.reserve(static_cast<std::size_t>(m));
  std::vector<char> used(static_cast<std::size_t>(rows), 0);

  Vec r = v_f.col(0);
  if (r.cwiseAbs().maxCoeff() == 0.0)
    throw std::runtime_error("deim_select_points: first basis vector is zero");
  Eigen::Index p = argmax_abs(r);
  points.push_back(static_cast<int>(p));
  used[static_cast<std::size_t>(p)] = 1;

  for (Eigen::Index j = 1; j < m; ++j) {
    const auto picked = v_f.leftCols(j);
    Eigen::MatrixXd pmat(j, j);
    Vec pv(j);
    for (Eigen::Index i = 0; i < j; ++i) {
      pmat.row(i) = picked.row(points[static_cast<std::size_t>(i)]);
      pv[i] = v_f(points[static_cast<std::size_t>(i)], j);
    }
    const Vec coeff = pmat.partialPivLu().solve(pv);
    r = v_f.col(j);
    r.noalias() -= picked * coeff;
    p = argmax_abs(r);
    // The residual vanishes at previously picked rows by construction, so an
    // exactly zero residual would otherwise sneak past the reuse check by
    // landing its argmax on an arbitrary fresh row.
    if (r.cwiseAbs().maxCoeff() == 0.0 || used[static_cast<std::size_t>(p)])
      throw std::runtime_error("deim_select_points: repeated interpolation point at vector " +
                               std::to_string(j) + "; basis is rank deficient");
    points.push_back(static_cast<int>(p));
    used[static_cast<std::size_t>(p)] = 1;
  }
  return points;
}

DeimOperator build_deim_operator(const PodBasis& basis, const NonlinearitySnapshots& snaps,
                                 const ModeSelection& select) {
  if (snaps.grid_size() != basis.grid_size() || snaps.g2.rows() != snaps.g1.rows() ||
      snaps.g3.rows() != snaps.g1.rows() || snaps.g2.cols() != snaps.g1.cols() ||
      snaps.g3.cols() != snaps.g1.cols())
    throw std::invalid_argument("build_deim_operator: snapshot blocks do not match the basis");

  const SvdFactors f1 = svd_factors(snaps.g1);
  const SvdFactors f2 = svd_factors(snaps.g2);
  const SvdFactors f3 = svd_factors(snaps.g3);

  int m = 0;
  if (select.fixed) {
    m = *select.fixed;
    if (m < 1) throw std::invalid_argument("build_deim_operator: mode count must be positive");
  } else {
    m = std::max({select_mode_count(f1.sigma, select.kappa),
                  select_mode_count(f2.sigma, select.kappa),
                  select_mode_count(f3.sigma, select.kappa)});
  }

  DeimOperator op;
  Eigen::MatrixXd b1 = leading_left_vectors(snaps.g1, f1, m);
  Eigen::MatrixXd b2 = leading_left_vectors(snaps.g2, f2, m);
  Eigen::MatrixXd b3 = leading_left_vectors(snaps.g3, f3, m);
  std::vector<int> p1 = deim_select_points(b1);
  std::vector<int> p2 = deim_select_points(b2);
  std::vector<int> p3 = deim_select_points(b3);
  op.c1 = finish_component(basis.v_u, std::move(b1), std::move(p1), "build_deim_operator");
  op.c2 = finish_component(basis.v_v, std::move(b2), std::move(p2), "build_deim_operator");
  op.c3 = finish_component(basis.v_h, std::move(b3), std::move(p3), "build_deim_operator");
  op.sigma_1 = f1.sigma;
  op.sigma_2 = f2.sigma;
  op.sigma_3 = f3.sigma;
  op.m_modes = m;
  return op;
}

DeimOperator make_deim_operator(const PodBasis& basis,
                                const std::array<Eigen::MatrixXd, 3>& bases,
                                const std::array<std::vector<int>, 3>& points) {
  DeimOperator op;
  op.c1 = finish_component(basis.v_u, bases[0], points[0], "make_deim_operator");
  op.c2 = finish_component(basis.v_v, bases[1], points[1], "make_deim_operator");
  op.c3 = finish_component(basis.v_h, bases[2], points[2], "make_deim_operator");
  op.m_modes = static_cast<int>(bases[0].cols());
  return op;
}

DeimRomSystem::DeimRomSystem(Grid grid, PhysParams params, PodBasis basis, DeimOperator deim)
    : grid_(grid), params_(std::move(params)), basis_(std::move(basis)), deim_(std::move(deim)) {
  const Eigen::Index big = grid_.n;
  const Eigen::Index n = basis_.n_modes;
  if (n < 1) throw std::invalid_argument("DeimRomSystem: basis holds no modes");
  if (basis_.grid_size() != big)
    throw std::invalid_argument("DeimRomSystem: basis rows do not match grid size");
  if (params_.h_b.size() != 0 && params_.h_b.size() != big)
    throw std::invalid_argument("DeimRomSystem: bottom profile length does not match grid");
  for (const DeimComponent* c : {&deim_.c1, &deim_.c2, &deim_.c3}) {
    if (c->basis.rows() != big)
      throw std::invalid_argument("DeimRomSystem: interpolation basis rows do not match grid");
    if (c->projector.rows() != n ||
        c->projector.cols() != static_cast<Eigen::Index>(c->points.size()))
      throw std::invalid_argument("DeimRomSystem: projector shape does not match basis and points");
    for (int p : c->points)
      if (p < 0 || p >= big)
        throw std::invalid_argument("DeimRomSystem: interpolation point out of range");
  }

  // Union of the five-point stencils of every interpolation point; the
  // right-hand side only ever reads these grid nodes.
  std::vector<int> all;
  const std::array<const std::vector<int>*, 3> point_sets = {&deim_.c1.points, &deim_.c2.points,
                                                             &deim_.c3.points};
  for (const auto* pts : point_sets)
    for (int p : *pts) {
      all.push_back(p);
      all.push_back(grid_.east(p));
      all.push_back(grid_.west(p));
      all.push_back(grid_.north(p));
      all.push_back(grid_.south(p));
    }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  rows_ = std::move(all);

  const auto local = [this](int node) {
    return static_cast<int>(std::lower_bound(rows_.begin(), rows_.end(), node) - rows_.begin());
  };
  for (std::size_t c = 0; c < 3; ++c) {
    Stencil& s = stencils_[c];
    for (int p : *point_sets[c]) {
      s.self.push_back(local(p));
      s.xp.push_back(local(grid_.east(p)));
      s.xm.push_back(local(grid_.west(p)));
      s.yp.push_back(local(grid_.north(p)));
      s.ym.push_back(local(grid_.south(p)));
    }
  }

  const Eigen::Index r_count = static_cast<Eigen::Index>(rows_.size());
  vu_rows_.resize(r_count, n);
  vv_rows_.resize(r_count, n);
  vh_rows_.resize(r_count, n);
  mean_u_rows_.resize(r_count);
  mean_v_rows_.resize(r_count);
  mean_h_rows_.resize(r_count);
  if (params_.h_b.size() != 0) h_b_rows_.resize(r_count);
  for (Eigen::Index r = 0; r < r_count; ++r) {
    const int node = rows_[static_cast<std::size_t>(r)];
    vu_rows_.row(r) = basis_.v_u.row(node);
    vv_rows_.row(r) = basis_.v_v.row(node);
    vh_rows_.row(r) = basis_.v_h.row(node);
    mean_u_rows_[r] = basis_.mean_u[node];
    mean_v_rows_[r] = basis_.mean_v[node];
    mean_h_rows_[r] = basis_.mean_h[node];
    if (h_b_rows_.size() != 0) h_b_rows_[r] = params_.h_b[node];
  }
  inv_2dx_ = 1.0 / (2.0 * grid_.dx);
  inv_2dy_ = 1.0 / (2.0 * grid_.dy);
}

void DeimRomSystem::rhs(const Eigen::Ref<const Vec>& z_r, Vec& out) const {
  const Eigen::Index n = basis_.n_modes;
  if (z_r.size() != 3 * n)
    throw std::invalid_argument("DeimRomSystem::rhs: reduced state length mismatch");

  const Eigen::Index r_count = static_cast<Eigen::Index>(rows_.size());
  Vec wu = mean_u_rows_;
  wu.noalias() += vu_rows_ * z_r.head(n);
  Vec wv = mean_v_rows_;
  wv.noalias() += vv_rows_ * z_r.segment(n, n);
  Vec wh = mean_h_rows_;
  wh.noalias() += vh_rows_ * z_r.tail(n);

  for (Eigen::Index r = 0; r < r_count; ++r)
    if (!(wh[r] > 0.0))
      throw std::domain_error("DeimRomSystem: nonpositive depth " + std::to_string(wh[r]) +
                              " in lifted state at grid node " +
                              std::to_string(rows_[static_cast<std::size_t>(r)]));

  const double omx = params_.omega_hat.x();
  const double omy = params_.omega_hat.y();
  const double omz = params_.omega_hat.z();
  const double delta = params_.delta;
  const double g = params_.g_nd;

  Vec f1(r_count), f2(r_count), phi(r_count);
  for (Eigen::Index r = 0; r < r_count; ++r) {
    const double hb = h_b_rows_.size() != 0 ? h_b_rows_[r] : 0.0;
    const double mid_depth = hb + 0.5 * wh[r];
    const double u = wu[r] - delta * omy * mid_depth;
    const double v = wv[r] + delta * omx * mid_depth;
    f1[r] = u * wh[r];
    f2[r] = v * wh[r];
    phi[r] = 0.5 * (u * u + v * v) + g * (hb + wh[r]) + 0.5 * delta * wh[r] * (omx * v - omy * u);
  }

  const auto vorticity_at = [&](const Stencil& s, std::size_t k) {
    const double zeta = omz + (wv[s.xp[k]] - wv[s.xm[k]]) * inv_2dx_ -
                        (wu[s.yp[k]] - wu[s.ym[k]]) * inv_2dy_;
    return zeta / wh[s.self[k]];
  };

  const Stencil& s1 = stencils_[0];
  Vec r1(static_cast<Eigen::Index>(s1.self.size()));
  for (std::size_t k = 0; k < s1.self.size(); ++k)
    r1[static_cast<Eigen::Index>(k)] =
        vorticity_at(s1, k) * f2[s1.self[k]] - (phi[s1.xp[k]] - phi[s1.xm[k]]) * inv_2dx_;

  const Stencil& s2 = stencils_[1];
  Vec r2(static_cast<Eigen::Index>(s2.self.size()));
  for (std::size_t k = 0; k < s2.self.size(); ++k)
    r2[static_cast<Eigen::Index>(k)] =
        -vorticity_at(s2, k) * f1[s2.self[k]] - (phi[s2.yp[k]] - phi[s2.ym[k]]) * inv_2dy_;

  const Stencil& s3 = stencils_[2];
  Vec r3(static_cast<Eigen::Index>(s3.self.size()));
  for (std::size_t k = 0; k < s3.self.size(); ++k)
    r3[static_cast<Eigen::Index>(k)] =
        -(f1[s3.xp[k]] - f1[s3.xm[k]]) * inv_2dx_ - (f2[s3.yp[k]] - f2[s3.ym[k]]) * inv_2dy_;

  out.resize(3 * n);
  out.head(n).noalias() = deim_.c1.projector * r1;
  out.segment(n, n).noalias() = deim_.c2.projector * r2;
  out.tail(n).noalias() = deim_.c3.projector * r3;
}

Vec reduced_rhs_deim(const DeimRomSystem& sys, const Eigen::Ref<const Vec>& z_r) {
  Vec out;
  sys.rhs(z_r, out);
  return out;
}

}  // namespace swrom
