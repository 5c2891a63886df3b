#include "swrom/avf.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include <utility>

namespace swrom {

void validate(const AvfConfig& cfg) {
  if (cfg.dt == 0.0 || !std::isfinite(cfg.dt))
    throw std::invalid_argument("AvfConfig: dt must be nonzero and finite");
  if (!(cfg.fp_tol > 0.0)) throw std::invalid_argument("AvfConfig: fp_tol must be positive");
  if (cfg.max_iter < 1) throw std::invalid_argument("AvfConfig: max_iter must be at least 1");
}

NonConvergenceError::NonConvergenceError(int iterations_, double residual_)
    : std::runtime_error("fixed-point iteration did not converge after " +
                         std::to_string(iterations_) +
                         " iterations, residual = " + std::to_string(residual_)),
      iterations(iterations_),
      residual(residual_) {}

void SkewGradientSystem::averaged_gradient(const Eigen::Ref<const Vec>& z_a,
                                           const Eigen::Ref<const Vec>& z_b,
                                           Vec& g) const {
  Vec mid = 0.5 * (z_a + z_b);
  Vec fa, fm, fb;
  gradient(z_a, fa);
  gradient(mid, fm);
  gradient(z_b, fb);
  g = (fa + 4.0 * fm + fb) / 6.0;
}

Vec avf_averaged_gradient(const SkewGradientSystem& sys, const Eigen::Ref<const Vec>& z_a,
                          const Eigen::Ref<const Vec>& z_b) {
  Vec g;
  sys.averaged_gradient(z_a, z_b, g);
  return g;
}

namespace {

// Fixed point of z' = z_a + dt*stage(z'). The increment of iteration j is
// exactly the equation residual of iterate j-1, so convergence requires two
// consecutive increments at or below fp_tol: the earlier one produced the
// accepted iterate, the later one verifies its residual.
template <typename StageFn>
StepResult picard_fixed_point(Eigen::Index dim, StageFn&& stage, const Eigen::Ref<const Vec>& z_a,
                              const AvfConfig& cfg) {
  validate(cfg);
  Vec z = z_a;
  Vec z_next(dim);
  double prev_increment = -1.0;
  for (int evals = 1; evals <= cfg.max_iter; ++evals) {
    z_next = z_a + cfg.dt * stage(z);
    const double increment = (z_next - z).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(increment)) throw NonConvergenceError(evals, increment);
    if (increment <= cfg.fp_tol) {
      // `increment` is the residual of the current iterate z.
      if (evals == 1 || prev_increment <= cfg.fp_tol)
        return {std::move(z), evals, increment};
    }
    z.swap(z_next);
    prev_increment = increment;
  }
  throw NonConvergenceError(cfg.max_iter, prev_increment);
}

}  // namespace

StepResult avf_step(const SkewGradientSystem& sys, const Eigen::Ref<const Vec>& z,
                    const AvfConfig& cfg) {
  const Eigen::Index dim = sys.dimension();
  Vec g_a(dim);
  sys.gradient(z, g_a);
  Vec mid(dim), g_m(dim), g_b(dim), g_avg(dim), out(dim);
  auto stage = [&](const Vec& z_cur) -> const Vec& {
    mid = 0.5 * (z + z_cur);
    sys.gradient(mid, g_m);
    sys.gradient(z_cur, g_b);
    g_avg = (g_a + 4.0 * g_m + g_b) / 6.0;
    sys.apply_skew(mid, g_avg, out);
    return out;
  };
  return picard_fixed_point(dim, stage, z, cfg);
}

StepResult avf_step(const RhsSystem& sys, const Eigen::Ref<const Vec>& z,
                    const AvfConfig& cfg) {
  const Eigen::Index dim = sys.dimension();
  Vec r_a(dim);
  sys.rhs(z, r_a);
  Vec mid(dim), r_m(dim), r_b(dim), out(dim);
  auto stage = [&](const Vec& z_cur) -> const Vec& {
    mid = 0.5 * (z + z_cur);
    sys.rhs(mid, r_m);
    sys.rhs(z_cur, r_b);
    out = (r_a + 4.0 * r_m + r_b) / 6.0;
    return out;
  };
  return picard_fixed_point(dim, stage, z, cfg);
}

namespace {

template <typename System>
Trajectory integrate_impl(const System& sys, const Vec& z0, int n_steps,
                          const AvfConfig& cfg, const StateObserver& observer,
                          bool retain_states) {
  validate(cfg);
  if (cfg.dt < 0.0)
    throw std::invalid_argument("integrate: dt must be positive for trajectories");
  if (n_steps < 0) throw std::invalid_argument("integrate: negative step count");
  if (z0.size() != sys.dimension())
    throw std::invalid_argument("integrate: initial state has wrong dimension");

  Trajectory traj;
  traj.dt = cfg.dt;
  traj.n_steps = n_steps;
  traj.picard_iterations.reserve(static_cast<std::size_t>(n_steps));
  if (retain_states) {
    traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.states.push_back(z0);
  }

  Vec z = z0;
  using clock = std::chrono::steady_clock;
  for (int k = 1; k <= n_steps; ++k) {
    StepResult res;
    const auto t0 = clock::now();
    try {
      res = avf_step(sys, z, cfg);
    } catch (const std::exception& e) {
      throw std::runtime_error("integrate: step " + std::to_string(k) +
                               " failed: " + e.what());
    }
    traj.solve_seconds += std::chrono::duration<double>(clock::now() - t0).count();
    z = std::move(res.z);
    traj.picard_iterations.push_back(res.iterations);
    if (observer) observer(k, k * cfg.dt, z);
    if (retain_states) traj.states.push_back(z);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const SkewGradientSystem& sys, const Vec& z0, int n_steps,
                     const AvfConfig& cfg, const StateObserver& observer,
                     bool retain_states) {
  return integrate_impl(sys, z0, n_steps, cfg, observer, retain_states);
}

Trajectory integrate(const RhsSystem& sys, const Vec& z0, int n_steps,
                     const AvfConfig& cfg, const StateObserver& observer,
                     bool retain_states) {
  return integrate_impl(sys, z0, n_steps, cfg, observer, retain_states);
}

}  // namespace swrom
