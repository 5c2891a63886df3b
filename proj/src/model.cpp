#include "swrom/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace swrom {

double NondimScales::wave_speed() const { return std::sqrt(gravity * height); }
double NondimScales::rossby_radius() const { return wave_speed() / (2.0 * rotation); }
double NondimScales::delta() const { return height / rossby_radius(); }

PhysParams params_from_latitude(double phi_lat, double delta, double g_nd) {
  PhysParams p;
  p.omega_hat = Eigen::Vector3d(0.0, std::cos(phi_lat), std::sin(phi_lat));
  p.delta = delta;
  p.g_nd = g_nd;
  p.phi_lat = phi_lat;
  return p;
}

Vec to_flat(const CanonicalState& s) {
  const auto n = s.h.size();
  if (s.u_tilde.size() != n || s.v_tilde.size() != n)
    throw std::invalid_argument("to_flat: component length mismatch");
  Vec z(3 * n);
  z.segment(0, n) = s.u_tilde;
  z.segment(n, n) = s.v_tilde;
  z.segment(2 * n, n) = s.h;
  return z;
}

CanonicalState from_flat(const Eigen::Ref<const Vec>& z) {
  if (z.size() % 3 != 0) throw std::invalid_argument("from_flat: size not divisible by 3");
  const auto n = z.size() / 3;
  CanonicalState s;
  s.u_tilde = z.segment(0, n);
  s.v_tilde = z.segment(n, n);
  s.h = z.segment(2 * n, n);
  return s;
}

namespace kernels {

void check_positive_depth(const Eigen::Ref<const Vec>& h, const char* where) {
  for (Eigen::Index i = 0; i < h.size(); ++i)
    if (!(h[i] > 0.0))
      throw std::domain_error(std::string(where) + ": nonpositive depth h[" +
                              std::to_string(i) + "] = " + std::to_string(h[i]));
}

void particle_velocities(const Eigen::Ref<const Vec>& z, const PhysParams& p, Vec& u,
                         Vec& v) {
  const auto n = z.size() / 3;
  const auto ut = z.segment(0, n);
  const auto vt = z.segment(n, n);
  const auto h = z.segment(2 * n, n);
  u.resize(n);
  v.resize(n);
  if (p.h_b.size() == 0) {
    u = ut.array() - (p.delta * p.omega_hat.y() * 0.5) * h.array();
    v = vt.array() + (p.delta * p.omega_hat.x() * 0.5) * h.array();
  } else {
    u = ut.array() -
        p.delta * p.omega_hat.y() * (p.h_b.array() + 0.5 * h.array());
    v = vt.array() +
        p.delta * p.omega_hat.x() * (p.h_b.array() + 0.5 * h.array());
  }
}

void gradient(const Eigen::Ref<const Vec>& z, const PhysParams& p, Vec& f) {
  const auto n = z.size() / 3;
  const auto h = z.segment(2 * n, n);
  Vec u, v;
  particle_velocities(z, p, u, v);
  f.resize(3 * n);
  f.segment(0, n) = u.array() * h.array();
  f.segment(n, n) = v.array() * h.array();
  auto phi = f.segment(2 * n, n);
  phi = 0.5 * (u.array().square() + v.array().square()) + p.g_nd * h.array() +
        (0.5 * p.delta) * h.array() *
            (p.omega_hat.x() * v.array() - p.omega_hat.y() * u.array());
  if (p.h_b.size() != 0) phi.array() += p.g_nd * p.h_b.array();
}

void vorticity(const Eigen::Ref<const Vec>& z, const DiffOperators& ops,
               const PhysParams& p, Vec& q) {
  const auto n = z.size() / 3;
  const auto ut = z.segment(0, n);
  const auto vt = z.segment(n, n);
  const auto h = z.segment(2 * n, n);
  check_positive_depth(h, "potential_vorticity");
  q.resize(n);
  q.noalias() = ops.Dx * vt;
  q.noalias() -= ops.Dy * ut;
  q.array() += p.omega_hat.z();
  q.array() /= h.array();
}

void poisson_apply(const Vec& q, const Eigen::Ref<const Vec>& f, const DiffOperators& ops,
                   Vec& out) {
  const auto n = f.size() / 3;
  const auto f1 = f.segment(0, n);
  const auto f2 = f.segment(n, n);
  const auto f3 = f.segment(2 * n, n);
  out.resize(3 * n);
  auto o1 = out.segment(0, n);
  auto o2 = out.segment(n, n);
  auto o3 = out.segment(2 * n, n);
  o1.noalias() = -(ops.Dx * f3);
  o1.array() += q.array() * f2.array();
  o2.noalias() = -(ops.Dy * f3);
  o2.array() -= q.array() * f1.array();
  o3.noalias() = -(ops.Dx * f1);
  o3.noalias() -= ops.Dy * f2;
}

}  // namespace kernels

CanonicalState canonical_from_particle(const ParticleVelocities& pv, const Vec& h,
                                       const PhysParams& p) {
  const auto n = h.size();
  if (pv.u.size() != n || pv.v.size() != n)
    throw std::invalid_argument("canonical_from_particle: component length mismatch");
  if (p.h_b.size() != 0 && p.h_b.size() != n)
    throw std::invalid_argument("canonical_from_particle: bottom profile length mismatch");
  kernels::check_positive_depth(h, "canonical_from_particle");
  CanonicalState s;
  s.h = h;
  if (p.h_b.size() == 0) {
    s.u_tilde = pv.u.array() + (p.delta * p.omega_hat.y() * 0.5) * h.array();
    s.v_tilde = pv.v.array() - (p.delta * p.omega_hat.x() * 0.5) * h.array();
  } else {
    s.u_tilde = pv.u.array() + p.delta * p.omega_hat.y() * (p.h_b.array() + 0.5 * h.array());
    s.v_tilde = pv.v.array() - p.delta * p.omega_hat.x() * (p.h_b.array() + 0.5 * h.array());
  }
  return s;
}

ParticleVelocities particle_from_canonical(const CanonicalState& s, const PhysParams& p) {
  Vec z = to_flat(s);
  ParticleVelocities pv;
  kernels::particle_velocities(z, p, pv.u, pv.v);
  return pv;
}

Vec potential_vorticity(const CanonicalState& s, const DiffOperators& ops,
                        const PhysParams& p) {
  Vec z = to_flat(s);
  Vec q;
  kernels::vorticity(z, ops, p, q);
  return q;
}

Vec bernoulli(const CanonicalState& s, const PhysParams& p) {
  Vec z = to_flat(s);
  Vec f;
  kernels::gradient(z, p, f);
  return f.segment(2 * s.h.size(), s.h.size());
}

Vec grad_hamiltonian(const CanonicalState& s, const PhysParams& p) {
  Vec z = to_flat(s);
  Vec f;
  kernels::gradient(z, p, f);
  return f;
}

Vec apply_poisson(const Vec& q, const Eigen::Ref<const Vec>& f, const DiffOperators& ops) {
  if (q.size() * 3 != f.size())
    throw std::invalid_argument("apply_poisson: q and F sizes inconsistent");
  Vec out;
  kernels::poisson_apply(q, f, ops, out);
  return out;
}

ConservedQuantities conserved_quantities(const CanonicalState& s, const Grid& grid,
                                         const DiffOperators& ops, const PhysParams& p) {
  if (s.h.size() != grid.n)
    throw std::invalid_argument("conserved_quantities: state does not match grid");
  kernels::check_positive_depth(s.h, "conserved_quantities");
  const double area_w = grid.cell_area();
  Vec z = to_flat(s);
  Vec u, v;
  kernels::particle_velocities(z, p, u, v);

  ConservedQuantities out;
  Eigen::ArrayXd hb = Eigen::ArrayXd::Zero(grid.n);
  if (p.h_b.size() != 0) hb = p.h_b.array();
  out.energy = area_w * (0.5 * s.h.array() * (u.array().square() + v.array().square()) +
                         p.g_nd * s.h.array() * (hb + 0.5 * s.h.array()))
                            .sum();
  Vec q;
  kernels::vorticity(z, ops, p, q);
  out.enstrophy = 0.5 * area_w * (s.h.array() * q.array().square()).sum();
  out.mass = area_w * s.h.sum();
  out.vorticity = area_w * (s.h.array() * q.array()).sum();
  return out;
}

}  // namespace swrom
