#include "ssf3/spectral_core.hpp"

#include <cmath>
#include <string>

namespace ssf3 {

HermitianOperator::HermitianOperator(const Matrix& entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw DimensionError("Hermitian operator needs a non-empty square matrix, got " +
                         std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
  }
  if (!entries.allFinite()) throw PreconditionError("matrix has non-finite entries");
  const double scale = entries.cwiseAbs().maxCoeff();
  const double violation = spectral::hermitian_violation(entries);
  if (violation > kSymmetryTolerance * scale) throw NonHermitianError(violation, scale);
  entries_ = 0.5 * (entries + entries.adjoint());
}

HermitianOperator HermitianOperator::zero(Eigen::Index n) {
  return HermitianOperator(Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& d) {
  return HermitianOperator(Matrix(d.cast<Complex>().asDiagonal()));
}

HermitianOperator HermitianOperator::axpy(double t, const HermitianOperator& other) const {
  spectral::require_same_dim(dim(), other.dim(), "axpy");
  HermitianOperator out;
  out.entries_ = entries_ + t * other.entries_;
  return out;
}

Matrix SpectralDecomposition::to_eigenbasis(const Matrix& x) const {
  return eigenvectors.adjoint() * x * eigenvectors;
}

Matrix SpectralDecomposition::from_eigenbasis(const Matrix& x) const {
  return eigenvectors * x * eigenvectors.adjoint();
}

namespace spectral {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
  }
}

double hermitian_violation(const Matrix& x) {
  return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

SpectralDecomposition eig(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) throw Error("Hermitian eigensolver failed to converge");
  SpectralDecomposition d{solver.eigenvalues(), solver.eigenvectors()};
  // Phase convention: first component of non-negligible modulus is real positive.
  const Eigen::Index n = d.dim();
  for (Eigen::Index k = 0; k < n; ++k) {
    auto col = d.eigenvectors.col(k);
    const double cutoff = 1e-8 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double mod = std::abs(col(i));
      if (mod > cutoff) {
        col *= std::conj(col(i)) / mod;
        col(i) = Complex(mod, 0.0);
        break;
      }
    }
  }
  return d;
}

HermitianOperator apply_function(const ScalarFunction& phi, const SpectralDecomposition& d) {
  phi.require_domain(d.min(), d.max());
  ComplexVector f(d.dim());
  for (Eigen::Index k = 0; k < d.dim(); ++k) f(k) = phi.value(d.eigenvalues(k));
  Matrix out = d.eigenvectors * f.asDiagonal() * d.eigenvectors.adjoint();
  return HermitianOperator(Matrix(0.5 * (out + out.adjoint())));
}

HermitianOperator apply_function(const ScalarFunction& phi, const HermitianOperator& a) {
  return apply_function(phi, eig(a));
}

double operator_norm(const Matrix& x) {
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues()(0);
}

double schatten_norm(const Matrix& x, SchattenP p) {
  if (!x.allFinite()) throw PreconditionError("schatten_norm: non-finite entries");
  if (p == SchattenP::Two) return x.norm();
  if (x.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(x);
  const RealVector& s = svd.singularValues();
  switch (p) {
    case SchattenP::One:
      return s.sum();
    case SchattenP::Three:
      return std::cbrt(s.array().cube().sum());
    case SchattenP::Op:
      return s(0);
    default:
      throw Error("invalid Schatten index");
  }
}

PairMeasure pair_measure(const SpectralDecomposition& left, const SpectralDecomposition& right,
                         const HermitianOperator& v) {
  require_same_dim(left.dim(), v.dim(), "pair_measure");
  require_same_dim(right.dim(), v.dim(), "pair_measure");
  const Matrix vt = left.eigenvectors.adjoint() * v.matrix() * right.eigenvectors;
  return PairMeasure{left.eigenvalues, right.eigenvalues, vt.cwiseAbs2()};
}

PairMeasure pair_measure(const SpectralDecomposition& d, const HermitianOperator& v) {
  PairMeasure m = pair_measure(d, d, v);
  m.weights = 0.5 * (m.weights + m.weights.transpose()).eval();
  return m;
}

}  // namespace spectral
}  // namespace ssf3
