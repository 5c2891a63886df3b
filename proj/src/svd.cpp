#include "swrom/svd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace swrom {

namespace {

// Flip each column so its largest-magnitude entry is positive. Ties keep the
// first such entry, so the result is deterministic.
void normalize_column_signs(Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index at = 0;
    m.col(j).cwiseAbs().maxCoeff(&at);
    if (m(at, j) < 0.0) m.col(j) *= -1.0;
  }
}

}  // namespace

SvdFactors svd_factors(const Eigen::MatrixXd& s) {
  if (s.rows() == 0 || s.cols() == 0)
    throw std::invalid_argument("svd_factors: empty matrix");

  SvdFactors out;
  out.gram_on_columns = s.cols() <= s.rows();

  Eigen::MatrixXd gram;
  if (out.gram_on_columns)
    gram.noalias() = s.transpose() * s;
  else
    gram.noalias() = s * s.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("svd_factors: eigensolver failed");

  // Eigenvalues come back ascending; reverse to nonincreasing singular values.
  const Eigen::Index k = gram.rows();
  out.sigma.resize(k);
  out.small_vectors.resize(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::Index src = k - 1 - j;
    out.sigma[j] = std::sqrt(std::max(eig.eigenvalues()[src], 0.0));
    out.small_vectors.col(j) = eig.eigenvectors().col(src);
  }
  normalize_column_signs(out.small_vectors);
  return out;
}

int numerical_rank(const SvdFactors& f, double rel_tol) {
  if (f.sigma.size() == 0 || f.sigma[0] <= 0.0) return 0;
  const double cut = rel_tol * f.sigma[0];
  int rank = 0;
  for (Eigen::Index j = 0; j < f.sigma.size(); ++j)
    if (f.sigma[j] > cut) rank = static_cast<int>(j) + 1;
  return rank;
}

Eigen::MatrixXd leading_left_vectors(const Eigen::MatrixXd& s, const SvdFactors& f,
                                     int count) {
  if (count < 1)
    throw std::invalid_argument("leading_left_vectors: count must be positive");
  const int rank = numerical_rank(f);
  if (count > rank)
    throw std::invalid_argument("leading_left_vectors: requested " +
                                std::to_string(count) + " vectors but numerical rank is " +
                                std::to_string(rank));

  Eigen::MatrixXd u;
  if (f.gram_on_columns) {
    // U = S * V * Sigma^{-1}, then a thin QR pass to remove the loss of
    // orthogonality that division by small singular values introduces.
    u.noalias() = s * (f.small_vectors.leftCols(count) *
                       f.sigma.head(count).cwiseInverse().asDiagonal());
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(s.rows(), count);
    // Keep each polished column aligned with the unpolished one (R diagonal
    // positive), so the polish never flips a direction.
    for (int j = 0; j < count; ++j)
      if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
    u = std::move(q);
  } else {
    u = f.small_vectors.leftCols(count);
  }
  normalize_column_signs(u);
  return u;
}

}  // namespace swrom
