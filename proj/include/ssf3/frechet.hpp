#pragma once

#include "ssf3/quadrature.hpp"
#include "ssf3/scalar_function.hpp"
#include "ssf3/spectral_core.hpp"

namespace ssf3 {

enum class DerivativeRoute { Poly, DivDiff, Fourier };

struct DivDiffOptions {
  // Eigenvalue pairs closer than confluence_tol * spectral scale use the
  // derivative limit. The scale is max(diameter, max |lambda|).
  double confluence_tol = 1e-8;
};

// First and second divided differences of phi on a fixed spectrum, with
// confluent limits for (near-)coincident points.
class DividedDifferences {
 public:
  DividedDifferences(const ScalarFunction& phi, const RealVector& eigenvalues,
                     DivDiffOptions opts = {});

  double first(Eigen::Index i, Eigen::Index j) const;
  double second(Eigen::Index i, Eigen::Index k, Eigen::Index j) const;
  double threshold() const { return threshold_; }

 private:
  ScalarFunction phi_;
  RealVector lambda_;
  RealVector f0_, f1_, f2_;
  double threshold_;
  bool has_first_;
  bool has_second_;
};

struct RemainderTrace {
  double value = 0.0;
  double imag_residue = 0.0;
};

struct SimplexRemainder {
  double value = 0.0;
  double lower_order_value = 0.0;
  int quad_order = 0;
  bool converged = true;
};

namespace frechet {

// sum_{j=0}^{r-1} A^{r-j-1} X A^j
Matrix d1_poly(const HermitianOperator& a, const Matrix& x, int r);

// D^2(A^r)(X, Y) as the pair of double sums
//   sum_{j=0}^{r-2} sum_{k=0}^{r-j-2} A^{r-j-k-2} X A^k Y A^j
// + sum_{j=1}^{r-1} sum_{k=0}^{j-1}   A^{r-j-1}   Y A^k X A^{j-k-1}.
Matrix d2_poly(const HermitianOperator& a, const Matrix& x, const Matrix& y, int r);

// Polynomial phi: linear combination of the monomial formulas above.
Matrix d1_poly(const ScalarFunction& phi, const HermitianOperator& a, const Matrix& x);
Matrix d2_poly(const ScalarFunction& phi, const HermitianOperator& a, const Matrix& x,
               const Matrix& y);

Matrix d1_divdiff(const ScalarFunction& phi, const SpectralDecomposition& d, const Matrix& x,
                  DivDiffOptions opts = {});
Matrix d2_divdiff(const ScalarFunction& phi, const SpectralDecomposition& d, const Matrix& x,
                  const Matrix& y, DivDiffOptions opts = {});

// Tr[phi(A+V) - phi(A) - D1 phi(A)(V) - 1/2 D2 phi(A)(V,V)] truncated after
// the requested order (1: Krein difference, 2: Koplienko difference, 3: full).
RemainderTrace remainder_trace_detailed(const ScalarFunction& phi, const HermitianOperator& a,
                                        const HermitianOperator& v, int order,
                                        DivDiffOptions opts = {});
double remainder_trace(const ScalarFunction& phi, const HermitianOperator& a,
                       const HermitianOperator& v, int order, DivDiffOptions opts = {});

// r sum_{k=0}^{r-2} int_0^1 ds int_0^s dtau Tr[V A_t^{r-k-2} V A_t^k - V A^{r-k-2} V A^k]
// by simplex quadrature at quad_order, cross-checked against quad_order / 2.
SimplexRemainder remainder_simplex_poly(const HermitianOperator& a, const HermitianOperator& v,
                                        int r, int quad_order = 32, double tol = 1e-10);

}  // namespace frechet
}  // namespace ssf3
