#include "swrom/ntswe_system.hpp"

#include <stdexcept>
#include <utility>

namespace swrom {

NtsweSystem::NtsweSystem(Grid grid, DiffOperators ops, PhysParams params)
    : grid_(grid), ops_(std::move(ops)), params_(std::move(params)) {
  if (ops_.Dx.rows() != grid_.n || ops_.Dy.rows() != grid_.n)
    throw std::invalid_argument("NtsweSystem: operators do not match grid");
  if (params_.h_b.size() != 0 && params_.h_b.size() != grid_.n)
    throw std::invalid_argument("NtsweSystem: bottom profile does not match grid");
}

void NtsweSystem::gradient(const Eigen::Ref<const Vec>& z, Vec& f) const {
  kernels::gradient(z, params_, f);
}

void NtsweSystem::apply_skew(const Eigen::Ref<const Vec>& z_mid, const Vec& g,
                             Vec& out) const {
  Vec q;
  kernels::vorticity(z_mid, ops_, params_, q);
  kernels::poisson_apply(q, g, ops_, out);
}

Vec NtsweSystem::vorticity(const Eigen::Ref<const Vec>& z) const {
  Vec q;
  kernels::vorticity(z, ops_, params_, q);
  return q;
}

Vec NtsweSystem::composite_rhs(const Eigen::Ref<const Vec>& z) const {
  Vec f, q, out;
  kernels::gradient(z, params_, f);
  kernels::vorticity(z, ops_, params_, q);
  kernels::poisson_apply(q, f, ops_, out);
  return out;
}

ConservedQuantities NtsweSystem::conserved(const Eigen::Ref<const Vec>& z) const {
  return conserved_quantities(from_flat(z), grid_, ops_, params_);
}

}  // namespace swrom
