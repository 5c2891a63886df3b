#pragma once

#include <Eigen/Dense>

#include "swrom/grid.hpp"

namespace swrom {

using Vec = Eigen::VectorXd;

// Reference scales used to derive the nondimensional rotation strength.
// With c = sqrt(g*H) and R = c/(2*Omega), delta = H/R = 2*Omega*H/c.
struct NondimScales {
  double height = 1000.0;    // mean fluid depth H, meters
  double rotation = 7.3e-5;  // planetary rotation Omega, 1/s
  double gravity = 1.0e-3;   // reduced gravity g, m/s^2

  double wave_speed() const;
  double rossby_radius() const;
  double delta() const;
};

// Nondimensional model parameters. omega_hat = (0, cos(phi), sin(phi)) for a
// tangent plane at latitude phi; h_b is the bottom profile (empty = flat 0).
struct PhysParams {
  Eigen::Vector3d omega_hat{0.0, 0.0, 1.0};
  double delta = 0.0;
  double g_nd = 1.0;
  Vec h_b;
  double phi_lat = 0.0;
};

PhysParams params_from_latitude(double phi_lat, double delta, double g_nd = 1.0);

// State in canonical velocities; all vectors have length n = grid.n.
struct CanonicalState {
  Vec u_tilde, v_tilde, h;
};

struct ParticleVelocities {
  Vec u, v;
};

struct ConservedQuantities {
  double energy = 0.0;
  double enstrophy = 0.0;
  double mass = 0.0;
  double vorticity = 0.0;
};

// Flat layout used by the integrators: z = [u_tilde; v_tilde; h].
Vec to_flat(const CanonicalState& s);
CanonicalState from_flat(const Eigen::Ref<const Vec>& z);

// u~ = u + delta*omega_y*(h_b + h/2), v~ = v - delta*omega_x*(h_b + h/2).
// With delta = 0 the velocities coincide bitwise. Requires h > 0.
CanonicalState canonical_from_particle(const ParticleVelocities& pv, const Vec& h,
                                       const PhysParams& p);
ParticleVelocities particle_from_canonical(const CanonicalState& s, const PhysParams& p);

// q = (omega_z + Dx v~ - Dy u~) / h. Throws std::domain_error naming the
// first offending index when h is not strictly positive.
Vec potential_vorticity(const CanonicalState& s, const DiffOperators& ops,
                        const PhysParams& p);

// Bernoulli potential
// Phi = (u*u + v*v)/2 + g*(h_b + h) + (delta/2) h (omega_x v - omega_y u),
// which is exactly dH/dh at fixed (u~, v~).
Vec bernoulli(const CanonicalState& s, const PhysParams& p);

// F = (u.h, v.h, Phi) stacked flat; the gradient of the discrete Hamiltonian
// with respect to (u~, v~, h) is dx*dy*F.
Vec grad_hamiltonian(const CanonicalState& s, const PhysParams& p);

// Tendency J(q) F = (q.F2 - Dx F3, -q.F1 - Dy F3, -Dx F1 - Dy F2).
Vec apply_poisson(const Vec& q, const Eigen::Ref<const Vec>& f, const DiffOperators& ops);

// H  = sum [ h(u^2+v^2)/2 + g h (h_b + h/2) ] dx dy
// Z  = (1/2) sum (Dx v~ - Dy u~ + omega_z)^2 / h dx dy
// M  = sum h dx dy
// V  = sum h q dx dy  (= omega_z * domain area for every state)
ConservedQuantities conserved_quantities(const CanonicalState& s, const Grid& grid,
                                         const DiffOperators& ops, const PhysParams& p);

// Allocation-light kernels on the flat layout, used by the full and reduced
// systems. All are pure; outputs are resized as needed.
namespace kernels {

// Splits are by convention: z.segment(0,n), z.segment(n,n), z.segment(2n,n).
void particle_velocities(const Eigen::Ref<const Vec>& z, const PhysParams& p, Vec& u,
                         Vec& v);
void gradient(const Eigen::Ref<const Vec>& z, const PhysParams& p, Vec& f);
void vorticity(const Eigen::Ref<const Vec>& z, const DiffOperators& ops,
               const PhysParams& p, Vec& q);
void poisson_apply(const Vec& q, const Eigen::Ref<const Vec>& f, const DiffOperators& ops,
                   Vec& out);
void check_positive_depth(const Eigen::Ref<const Vec>& h, const char* where);

}  // namespace kernels

}  // namespace swrom
