#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "swrom/grid.hpp"
#include "swrom/model.hpp"

namespace swrom::testing {

inline Vec random_vec(Eigen::Index n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

inline Eigen::MatrixXd random_mat(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = dist(gen);
  return m;
}

// Orthonormal rows x cols matrix from a seeded QR factorization.
inline Eigen::MatrixXd random_orthonormal(Eigen::Index rows, Eigen::Index cols,
                                          unsigned seed) {
  Eigen::MatrixXd a = random_mat(rows, rows, seed);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  return q;
}

// Smooth periodic state with nonconstant positive depth and sheared
// velocities; every term of the model sees a nonzero contribution.
inline CanonicalState smooth_state(const Grid& g) {
  const double tp = 2.0 * std::numbers::pi;
  CanonicalState s;
  s.u_tilde.resize(g.n);
  s.v_tilde.resize(g.n);
  s.h.resize(g.n);
  for (int k = 0; k < g.n; ++k) {
    const double xh = (g.x(g.x_index(k)) - g.a) / (g.b - g.a);
    const double yh = (g.y(g.y_index(k)) - g.c) / (g.d - g.c);
    s.u_tilde[k] = 0.30 * std::sin(tp * xh) * std::cos(tp * yh) + 0.10;
    s.v_tilde[k] = -0.20 * std::cos(tp * xh) * std::sin(2.0 * tp * yh) + 0.05;
    s.h[k] = 1.0 + 0.20 * std::sin(tp * xh) * std::sin(tp * yh) + 0.10 * std::cos(tp * xh);
  }
  return s;
}

// Gauss-Legendre nodes and weights on [0,1], by Newton iteration on the
// Legendre recurrence. Used as an independent quadrature oracle.
inline std::vector<std::pair<double, double>> gauss_legendre_01(int n) {
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  for (int i = 1; i <= n; ++i) {
    double x = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    out.emplace_back(0.5 * (x + 1.0), 0.5 * w);
  }
  return out;
}

// Max-norm of the difference, zero when both sides are bitwise equal.
inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

template <typename Exception, typename Fn>
bool throws_with(Fn&& fn, const std::string& needle) {
  try {
    fn();
  } catch (const Exception& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  } catch (...) {
    return false;
  }
  return false;
}

}  // namespace swrom::testing
