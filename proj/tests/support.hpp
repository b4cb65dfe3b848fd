#pragma once

// Seeded generators and a for_all driver for property tests. Independent of
// the library's CounterRng so test inputs do not share its code path.

#include <cstdint>
#include <random>

#include <Eigen/Dense>
#include <doctest.h>

#include "sympdiv/linalg.hpp"
#include "sympdiv/space.hpp"

namespace testing {

using sympdiv::Matrix;
using sympdiv::Vector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_); }

  Vector vec(std::size_t n, double lo, double hi) {
    Vector v(n);
    for (double& x : v) x = real(lo, hi);
    return v;
  }
  sympdiv::PhasePoint point(std::size_t n, double lo, double hi) { return sympdiv::PhasePoint(vec(2 * n, lo, hi)); }

  Matrix square(std::size_t n, double lo, double hi) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = real(lo, hi);
    return m;
  }
  // M^T M + I, comfortably positive definite.
  Matrix spd(std::size_t n) {
    const Matrix m = square(n, -1, 1);
    return m.transpose() * m + Matrix::identity(n);
  }
  // Diagonally dominant, hence invertible.
  Matrix invertible(std::size_t n) {
    Matrix m = square(n, -1, 1);
    for (std::size_t i = 0; i < n; ++i) m(i, i) += (m(i, i) >= 0 ? 1.0 : -1.0) * static_cast<double>(n);
    return m;
  }

 private:
  std::mt19937_64 eng_;
};

// Runs `body` on `trials` independently seeded generators.
template <class Body>
void for_all(int trials, std::uint64_t seed, Body body) {
  for (int i = 0; i < trials; ++i) {
    CAPTURE(i);
    Gen g(seed * 7919 + static_cast<std::uint64_t>(i));
    body(g);
  }
}

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline double max_abs_diff(const Matrix& a, const Eigen::MatrixXd& b) {
  return (to_eigen(a) - b).cwiseAbs().maxCoeff();
}

}  // namespace testing
