#pragma once

#include <Eigen/Dense>

#include "swrom/model.hpp"

namespace swrom {

// Thin SVD factors of a snapshot matrix, computed from the Gram matrix of the
// smaller side (method of snapshots). sigma holds all min(rows, cols)
// singular values in nonincreasing order; small_vectors are the orthonormal
// eigenvectors of the Gram matrix in the matching order (right singular
// vectors when the Gram side is the columns, left otherwise).
struct SvdFactors {
  Vec sigma;
  Eigen::MatrixXd small_vectors;
  bool gram_on_columns = true;
};

SvdFactors svd_factors(const Eigen::MatrixXd& s);

// Largest index p with sigma[p-1] > rel_tol * sigma[0]; 0 for a zero matrix.
int numerical_rank(const SvdFactors& f, double rel_tol = 1e-12);

// First `count` left singular vectors of s, orthonormalized (thin QR polish)
// and sign-normalized so each column's largest-magnitude entry is positive.
// Throws std::invalid_argument when count exceeds the numerical rank.
Eigen::MatrixXd leading_left_vectors(const Eigen::MatrixXd& s, const SvdFactors& f,
                                     int count);

}  // namespace swrom
