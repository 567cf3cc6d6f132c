#pragma once

#include "ssf3/scalar_function.hpp"
#include "ssf3/types.hpp"

namespace ssf3 {

// Dense self-adjoint matrix. Construction validates conjugate symmetry and
// finiteness, then stores the exactly Hermitian part.
class HermitianOperator {
 public:
  static constexpr double kSymmetryTolerance = 1e-12;

  HermitianOperator() = default;
  explicit HermitianOperator(const Matrix& entries);

  static HermitianOperator zero(Eigen::Index n);
  static HermitianOperator diagonal(const RealVector& d);

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }

  // this + t * other
  HermitianOperator axpy(double t, const HermitianOperator& other) const;

 private:
  Matrix entries_;
};

// Eigenvalues ascending, eigenvectors as orthonormal columns.
struct SpectralDecomposition {
  RealVector eigenvalues;
  Matrix eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }
  double min() const { return eigenvalues(0); }
  double max() const { return eigenvalues(eigenvalues.size() - 1); }
  double diameter() const { return max() - min(); }

  // U* X U
  Matrix to_eigenbasis(const Matrix& x) const;
  // U X U*
  Matrix from_eigenbasis(const Matrix& x) const;
};

// Computed distribution of |<u_i, V w_j>|^2 over eigenvalue pairs.
struct PairMeasure {
  RealVector left;   // lambda_i
  RealVector right;  // mu_j
  RealMatrix weights;

  double total() const { return weights.sum(); }
};

enum class SchattenP { One, Two, Three, Op };

namespace spectral {

SpectralDecomposition eig(const HermitianOperator& a);

HermitianOperator apply_function(const ScalarFunction& phi, const HermitianOperator& a);
HermitianOperator apply_function(const ScalarFunction& phi, const SpectralDecomposition& d);

double schatten_norm(const Matrix& x, SchattenP p);
double operator_norm(const Matrix& x);

PairMeasure pair_measure(const SpectralDecomposition& d, const HermitianOperator& v);
PairMeasure pair_measure(const SpectralDecomposition& left, const SpectralDecomposition& right,
                         const HermitianOperator& v);

// max |x_ij - conj(x_ji)|
double hermitian_violation(const Matrix& x);

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what);

}  // namespace spectral
}  // namespace ssf3
