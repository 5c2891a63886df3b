#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <vector>

#include "swrom/model.hpp"

namespace swrom {

// One implicit step of the average vector field method:
//   z' = z + dt * J((z'+z)/2) * avg_grad(z, z'),
// solved by undamped fixed-point iteration with initial guess z.
// fp_tol applies in the max norm to both the iteration increment and the
// equation residual of the returned iterate.
struct AvfConfig {
  double dt = 0.1;
  double fp_tol = 1e-11;
  int max_iter = 200;
};

void validate(const AvfConfig& cfg);  // dt != 0, fp_tol > 0, max_iter >= 1

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(int iterations, double residual);
  int iterations;
  double residual;
};

// A system dz/dt = J(z) F(z) with J(z) skew-symmetric for every z.
// averaged_gradient must return the exact segment average int_0^1 F dxi;
// the default implementation is Simpson's rule, exact whenever F is a
// componentwise quadratic polynomial along the segment.
class SkewGradientSystem {
 public:
  virtual ~SkewGradientSystem() = default;
  virtual Eigen::Index dimension() const = 0;
  virtual void gradient(const Eigen::Ref<const Vec>& z, Vec& f) const = 0;
  virtual void apply_skew(const Eigen::Ref<const Vec>& z_mid, const Vec& g,
                          Vec& out) const = 0;
  virtual void averaged_gradient(const Eigen::Ref<const Vec>& z_a,
                                 const Eigen::Ref<const Vec>& z_b, Vec& g) const;
};

// A system dz/dt = R(z) whose step averages the right-hand side itself by
// Simpson's rule (used by hyper-reduced systems where J and the gradient are
// approximated jointly and no exact skew splitting is available).
class RhsSystem {
 public:
  virtual ~RhsSystem() = default;
  virtual Eigen::Index dimension() const = 0;
  virtual void rhs(const Eigen::Ref<const Vec>& z, Vec& out) const = 0;
};

Vec avf_averaged_gradient(const SkewGradientSystem& sys, const Eigen::Ref<const Vec>& z_a,
                          const Eigen::Ref<const Vec>& z_b);

struct StepResult {
  Vec z;
  int iterations = 0;     // stage evaluations spent
  double residual = 0.0;  // verified max-norm equation residual
};

StepResult avf_step(const SkewGradientSystem& sys, const Eigen::Ref<const Vec>& z,
                    const AvfConfig& cfg);
StepResult avf_step(const RhsSystem& sys, const Eigen::Ref<const Vec>& z,
                    const AvfConfig& cfg);

struct Trajectory {
  std::vector<Vec> states;  // k = 0..n_steps when retained, else empty
  double dt = 0.0;
  int n_steps = 0;
  double solve_seconds = 0.0;  // step solves only; observers and I/O excluded
  std::vector<int> picard_iterations;

  double time(int k) const { return k * dt; }
};

// Called after every accepted step; must not mutate the state.
using StateObserver = std::function<void(int step, double t, const Vec& z)>;

Trajectory integrate(const SkewGradientSystem& sys, const Vec& z0, int n_steps,
                     const AvfConfig& cfg, const StateObserver& observer = {},
                     bool retain_states = true);
Trajectory integrate(const RhsSystem& sys, const Vec& z0, int n_steps,
                     const AvfConfig& cfg, const StateObserver& observer = {},
                     bool retain_states = true);

}  // namespace swrom
