#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ssf3/spectral_core.hpp"
#include "ssf3/verify_oracles.hpp"

namespace ssf3::testing {

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double rel_diff(double x, double y) {
  return std::abs(x - y) / (1.0 + std::max(std::abs(x), std::abs(y)));
}

inline HermitianOperator random_op(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  return HermitianOperator(scale * oracle::random_hermitian(n, rng));
}

inline HermitianOperator scaled_op(std::mt19937_64& rng, Eigen::Index n, double hs_norm) {
  Matrix m = oracle::random_hermitian(n, rng);
  m *= hs_norm / m.norm();
  return HermitianOperator(m);
}

inline Matrix random_general(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal;
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

// Sum over every word of length r in {A, X, Y} with exactly one X and one Y:
// the mixed second derivative of (A + sX + tY)^r at s = t = 0.
inline Matrix word_expansion_d2(const Matrix& a, const Matrix& x, const Matrix& y, int r) {
  const Eigen::Index n = a.rows();
  Matrix out = Matrix::Zero(n, n);
  for (int p = 0; p < r; ++p) {
    for (int q = 0; q < r; ++q) {
      if (p == q) continue;
      Matrix w = Matrix::Identity(n, n);
      for (int k = 0; k < r; ++k) w = w * (k == p ? x : (k == q ? y : a));
      out += w;
    }
  }
  return out;
}

}  // namespace ssf3::testing
