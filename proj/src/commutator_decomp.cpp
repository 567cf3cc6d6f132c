#include "ssf3/commutator_decomp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ssf3::commutator {
namespace {

// Union-find over indices; pairs closer than threshold are merged.
class Partition {
 public:
  explicit Partition(Eigen::Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Eigen::Index{0});
  }
  Eigen::Index find(Eigen::Index i) {
    auto& p = parent_[static_cast<std::size_t>(i)];
    if (p != i) p = find(p);
    return p;
  }
  void unite(Eigen::Index i, Eigen::Index j) {
    const Eigen::Index ri = find(i);
    const Eigen::Index rj = find(j);
    if (ri != rj) parent_[static_cast<std::size_t>(std::max(ri, rj))] = std::min(ri, rj);
  }
  BlockStructure blocks() {
    BlockStructure out;
    std::vector<Eigen::Index> slot(parent_.size(), -1);
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(parent_.size()); ++i) {
      const Eigen::Index r = find(i);
      auto& s = slot[static_cast<std::size_t>(r)];
      if (s < 0) {
        s = static_cast<Eigen::Index>(out.size());
        out.emplace_back();
      }
      out[static_cast<std::size_t>(s)].push_back(i);
    }
    return out;
  }

 private:
  std::vector<Eigen::Index> parent_;
};

Matrix block_diagonal_part(const Matrix& xt, const BlockStructure& blocks) {
  Matrix out = Matrix::Zero(xt.rows(), xt.cols());
  for (const auto& block : blocks) {
    for (Eigen::Index i : block) {
      for (Eigen::Index j : block) out(i, j) = xt(i, j);
    }
  }
  return out;
}

std::vector<Eigen::Index> block_of(const BlockStructure& blocks, Eigen::Index n) {
  std::vector<Eigen::Index> id(static_cast<std::size_t>(n), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (Eigen::Index i : blocks[b]) id[static_cast<std::size_t>(i)] = static_cast<Eigen::Index>(b);
  }
  return id;
}

PinchDecomposition pinch_in_basis(const Matrix& basis, const Matrix& x, BlockStructure blocks,
                                  double tol) {
  const Matrix xt = basis.adjoint() * x * basis;
  PinchDecomposition out;
  out.v1 = basis * block_diagonal_part(xt, blocks) * basis.adjoint();
  out.v2 = x - out.v1;
  out.blocks = std::move(blocks);
  out.tolerance = tol;
  return out;
}

}  // namespace

Matrix commutator(const Matrix& b, const Matrix& x) {
  spectral::require_same_dim(b.rows(), x.rows(), "commutator");
  spectral::require_same_dim(b.cols(), x.cols(), "commutator");
  return b * x - x * b;
}

Complex hs_inner(const Matrix& x, const Matrix& y) {
  return (x.adjoint() * y).trace();
}

BlockStructure group_eigenvalues(const RealVector& eigenvalues, double tol) {
  const Eigen::Index n = eigenvalues.size();
  Partition part(n);
  if (n == 0) return {};
  const double scale = std::max(eigenvalues.maxCoeff() - eigenvalues.minCoeff(),
                                eigenvalues.cwiseAbs().maxCoeff());
  const double threshold = tol * scale;
  // Eigenvalues arrive sorted; chains link consecutive neighbours.
  for (Eigen::Index i = 1; i < n; ++i) {
    if (eigenvalues(i) - eigenvalues(i - 1) <= threshold) part.unite(i - 1, i);
  }
  return part.blocks();
}

PinchDecomposition pinch(const SpectralDecomposition& d, const Matrix& x, double tol) {
  spectral::require_same_dim(d.dim(), x.rows(), "pinch");
  spectral::require_same_dim(d.dim(), x.cols(), "pinch");
  return pinch_in_basis(d.eigenvectors, x, group_eigenvalues(d.eigenvalues, tol), tol);
}

Matrix solve_commutator_preimage(const SpectralDecomposition& d, const Matrix& v2,
                                 const BlockStructure& blocks, double consistency_tol) {
  spectral::require_same_dim(d.dim(), v2.rows(), "solve_commutator_preimage");
  const Eigen::Index n = d.dim();
  const Matrix vt = d.to_eigenbasis(v2);
  const auto id = block_of(blocks, n);
  const double block_mass = block_diagonal_part(vt, blocks).norm();
  if (block_mass > consistency_tol * std::max(1.0, vt.norm())) {
    std::ostringstream msg;
    msg << "v2 has a kernel (block-diagonal) component of norm " << block_mass
        << "; it is not in the range of the commutator map";
    throw InconsistentInputError(msg.str());
  }
  Matrix yt = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (id[static_cast<std::size_t>(i)] == id[static_cast<std::size_t>(j)]) continue;
      yt(i, j) = vt(i, j) / (d.eigenvalues(i) - d.eigenvalues(j));
    }
  }
  return d.from_eigenbasis(yt);
}

Matrix solve_commutator_preimage(const SpectralDecomposition& d, const Matrix& v2, double tol) {
  return solve_commutator_preimage(d, v2, group_eigenvalues(d.eigenvalues, tol));
}

PinchDecomposition resolvent_pinch(const HermitianOperator& a, const Matrix& x, double tol) {
  spectral::require_same_dim(a.dim(), x.rows(), "resolvent_pinch");
  const Eigen::Index n = a.dim();
  const Matrix shifted = a.matrix() + Complex(0.0, 1.0) * Matrix::Identity(n, n);
  const Matrix b = shifted.partialPivLu().inverse();

  Eigen::ComplexEigenSolver<Matrix> solver(b);
  if (solver.info() != Eigen::Success) throw Error("resolvent eigensolver failed to converge");
  const ComplexVector& mu = solver.eigenvalues();
  const Matrix& vecs = solver.eigenvectors();

  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    scale = std::max(scale, std::abs(mu(i)));
    for (Eigen::Index j = 0; j < i; ++j) scale = std::max(scale, std::abs(mu(i) - mu(j)));
  }
  Partition part(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (std::abs(mu(i) - mu(j)) <= tol * scale) part.unite(i, j);
    }
  }
  BlockStructure blocks = part.blocks();

  // B is normal, so eigenspaces of distinct groups are orthogonal; an
  // orthonormal basis inside each group completes a unitary.
  Matrix basis(n, n);
  BlockStructure reindexed;
  Eigen::Index col = 0;
  for (const auto& block : blocks) {
    Matrix group(n, static_cast<Eigen::Index>(block.size()));
    for (std::size_t k = 0; k < block.size(); ++k) group.col(static_cast<Eigen::Index>(k)) = vecs.col(block[k]);
    Eigen::HouseholderQR<Matrix> qr(group);
    const Matrix q = qr.householderQ() * Matrix::Identity(n, group.cols());
    std::vector<Eigen::Index> idx;
    for (Eigen::Index k = 0; k < group.cols(); ++k) {
      basis.col(col) = q.col(k);
      idx.push_back(col++);
    }
    reindexed.push_back(std::move(idx));
  }
  return pinch_in_basis(basis, x, std::move(reindexed), tol);
}

PathDecomposition path_decomposition(const HermitianOperator& a, const HermitianOperator& v,
                                     const std::vector<double>& taus, double tol) {
  spectral::require_same_dim(a.dim(), v.dim(), "path_decomposition");
  PathDecomposition out;
  std::vector<std::size_t> previous_sizes;
  for (double tau : taus) {
    if (tau < 0.0 || tau > 1.0) throw PreconditionError("path_decomposition: tau outside [0, 1]");
    const SpectralDecomposition d = spectral::eig(a.axpy(tau, v));
    PathNode node;
    node.tau = tau;
    node.decomposition = pinch(d, v.matrix(), tol);
    node.v1_norm = node.decomposition.v1.norm();
    node.v2_norm = node.decomposition.v2.norm();

    std::vector<std::size_t> sizes;
    for (const auto& block : node.decomposition.blocks) sizes.push_back(block.size());
    if (!previous_sizes.empty() && sizes != previous_sizes) {
      std::ostringstream msg;
      msg << "block structure changes at tau = " << tau << " (" << previous_sizes.size() << " -> "
          << sizes.size() << " blocks); possible eigenvalue crossing";
      out.warnings.push_back(msg.str());
    }
    previous_sizes = std::move(sizes);
    out.nodes.push_back(std::move(node));
  }
  return out;
}

}  // namespace ssf3::commutator
