#pragma once

#include "swrom/avf.hpp"
#include "swrom/grid.hpp"
#include "swrom/model.hpp"

namespace swrom {

// Full-order semi-discrete system dz/dt = J(z) F(z) on the flat layout
// z = [u~; v~; h]. Pure per-call evaluation; instances are safe for
// concurrent read-only use.
class NtsweSystem final : public SkewGradientSystem {
 public:
  NtsweSystem(Grid grid, DiffOperators ops, PhysParams params);

  Eigen::Index dimension() const override { return 3 * static_cast<Eigen::Index>(grid_.n); }
  void gradient(const Eigen::Ref<const Vec>& z, Vec& f) const override;
  void apply_skew(const Eigen::Ref<const Vec>& z_mid, const Vec& g, Vec& out) const override;

  Vec vorticity(const Eigen::Ref<const Vec>& z) const;
  // Composite right-hand side J(z) F(z).
  Vec composite_rhs(const Eigen::Ref<const Vec>& z) const;
  ConservedQuantities conserved(const Eigen::Ref<const Vec>& z) const;

  const Grid& grid() const { return grid_; }
  const DiffOperators& ops() const { return ops_; }
  const PhysParams& params() const { return params_; }

 private:
  Grid grid_;
  DiffOperators ops_;
  PhysParams params_;
};

}  // namespace swrom
