#pragma once

#include <string>
#include <vector>

#include "ssf3/spectral_core.hpp"

namespace ssf3 {

// Partition of eigenvalue indices into maximal chains of near-degenerate values.
using BlockStructure = std::vector<std::vector<Eigen::Index>>;

// X = v1 + v2 with v1 in Ker(M_B) and v2 in its Hilbert-Schmidt orthogonal
// complement Ran(M_B).
struct PinchDecomposition {
  Matrix v1;
  Matrix v2;
  BlockStructure blocks;
  double tolerance = 0.0;
};

struct PathNode {
  double tau = 0.0;
  PinchDecomposition decomposition;
  double v1_norm = 0.0;
  double v2_norm = 0.0;
};

struct PathDecomposition {
  std::vector<PathNode> nodes;
  std::vector<std::string> warnings;
};

namespace commutator {

inline constexpr double kDefaultGroupingTol = 1e-9;

// B X - X B
Matrix commutator(const Matrix& b, const Matrix& x);

// Chains of eigenvalues whose consecutive gaps are below tol * diameter.
BlockStructure group_eigenvalues(const RealVector& eigenvalues, double tol);

PinchDecomposition pinch(const SpectralDecomposition& d, const Matrix& x,
                         double tol = kDefaultGroupingTol);

// Minimum-norm Y with [B, Y] = v2 (zero on the diagonal blocks). Throws
// InconsistentInputError if v2 has a block-diagonal component.
Matrix solve_commutator_preimage(const SpectralDecomposition& d, const Matrix& v2,
                                 const BlockStructure& blocks, double consistency_tol = 1e-10);
Matrix solve_commutator_preimage(const SpectralDecomposition& d, const Matrix& v2,
                                 double tol = kDefaultGroupingTol);

// Decomposition with respect to M_B for the normal operator B = (A + i)^{-1},
// computed from B itself (complex eigenvalues grouped in the plane).
PinchDecomposition resolvent_pinch(const HermitianOperator& a, const Matrix& x,
                                   double tol = kDefaultGroupingTol);

PathDecomposition path_decomposition(const HermitianOperator& a, const HermitianOperator& v,
                                     const std::vector<double>& taus,
                                     double tol = kDefaultGroupingTol);

// Tr(X* Y)
Complex hs_inner(const Matrix& x, const Matrix& y);

}  // namespace commutator
}  // namespace ssf3
