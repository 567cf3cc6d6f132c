#include "ssf3/frechet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace ssf3 {

DividedDifferences::DividedDifferences(const ScalarFunction& phi, const RealVector& eigenvalues,
                                       DivDiffOptions opts)
    : phi_(phi), lambda_(eigenvalues), has_first_(true), has_second_(true) {
  const Eigen::Index n = lambda_.size();
  double scale = 0.0;
  if (n > 0) {
    scale = std::max(lambda_.maxCoeff() - lambda_.minCoeff(), lambda_.cwiseAbs().maxCoeff());
  }
  threshold_ = opts.confluence_tol * scale;
  f0_.resize(n);
  f1_.resize(n);
  f2_.resize(n);
  // Derivatives are only consulted at confluent points; grid functions without
  // derivative data can still supply every distinct-point difference.
  auto try_derivative = [&](double x, int order, bool& ok) {
    try {
      return phi_.derivative(x, order);
    } catch (const DomainError&) {
      ok = false;
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  for (Eigen::Index i = 0; i < n; ++i) {
    f0_(i) = phi_.value(lambda_(i));
    f1_(i) = try_derivative(lambda_(i), 1, has_first_);
    f2_(i) = try_derivative(lambda_(i), 2, has_second_);
  }
}

double DividedDifferences::first(Eigen::Index i, Eigen::Index j) const {
  const double d = lambda_(i) - lambda_(j);
  if (std::abs(d) <= threshold_) {
    if (!has_first_) throw DomainError("confluent divided difference needs phi' data");
    return 0.5 * (f1_(i) + f1_(j));
  }
  return (f0_(i) - f0_(j)) / d;
}

double DividedDifferences::second(Eigen::Index i, Eigen::Index k, Eigen::Index j) const {
  std::array<Eigen::Index, 3> idx{i, k, j};
  std::sort(idx.begin(), idx.end(),
            [&](Eigen::Index p, Eigen::Index q) { return lambda_(p) < lambda_(q); });
  const double spread = lambda_(idx[2]) - lambda_(idx[0]);
  if (spread <= threshold_) {
    if (!has_second_) throw DomainError("second divided difference needs phi'' data");
    return 0.25 * (f2_(idx[0]) + f2_(idx[2]));
  }
  return (first(idx[1], idx[2]) - first(idx[0], idx[1])) / spread;
}

namespace frechet {
namespace {

std::vector<Matrix> powers(const Matrix& a, int max_power) {
  std::vector<Matrix> p;
  p.reserve(static_cast<std::size_t>(std::max(max_power, 0)) + 1);
  p.push_back(Matrix::Identity(a.rows(), a.cols()));
  for (int k = 1; k <= max_power; ++k) p.push_back(p.back() * a);
  return p;
}

void check_direction(const HermitianOperator& a, const Matrix& x) {
  spectral::require_same_dim(a.dim(), x.rows(), "direction");
  spectral::require_same_dim(a.dim(), x.cols(), "direction");
}

}  // namespace

Matrix d1_poly(const HermitianOperator& a, const Matrix& x, int r) {
  check_direction(a, x);
  if (r < 0) throw PreconditionError("d1_poly: r must be non-negative");
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  if (r == 0) return out;
  const auto p = powers(a.matrix(), r - 1);
  for (int j = 0; j <= r - 1; ++j) out += p[r - j - 1] * x * p[j];
  return out;
}

Matrix d2_poly(const HermitianOperator& a, const Matrix& x, const Matrix& y, int r) {
  check_direction(a, x);
  check_direction(a, y);
  if (r < 0) throw PreconditionError("d2_poly: r must be non-negative");
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  if (r < 2) return out;
  const auto p = powers(a.matrix(), r - 2);
  for (int j = 0; j <= r - 2; ++j) {
    for (int k = 0; k <= r - j - 2; ++k) out += p[r - j - k - 2] * x * p[k] * y * p[j];
  }
  for (int j = 1; j <= r - 1; ++j) {
    for (int k = 0; k <= j - 1; ++k) out += p[r - j - 1] * y * p[k] * x * p[j - k - 1];
  }
  return out;
}

Matrix d1_poly(const ScalarFunction& phi, const HermitianOperator& a, const Matrix& x) {
  const auto& c = phi.as_polynomial().coefficients;
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  for (std::size_t r = 1; r < c.size(); ++r) {
    if (c[r] != 0.0) out += c[r] * d1_poly(a, x, static_cast<int>(r));
  }
  return out;
}

Matrix d2_poly(const ScalarFunction& phi, const HermitianOperator& a, const Matrix& x,
               const Matrix& y) {
  const auto& c = phi.as_polynomial().coefficients;
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  for (std::size_t r = 2; r < c.size(); ++r) {
    if (c[r] != 0.0) out += c[r] * d2_poly(a, x, y, static_cast<int>(r));
  }
  return out;
}

Matrix d1_divdiff(const ScalarFunction& phi, const SpectralDecomposition& d, const Matrix& x,
                  DivDiffOptions opts) {
  spectral::require_same_dim(d.dim(), x.rows(), "d1_divdiff");
  spectral::require_same_dim(d.dim(), x.cols(), "d1_divdiff");
  phi.require_domain(d.min(), d.max());
  const DividedDifferences dd(phi, d.eigenvalues, opts);
  Matrix xt = d.to_eigenbasis(x);
  for (Eigen::Index j = 0; j < d.dim(); ++j) {
    for (Eigen::Index i = 0; i < d.dim(); ++i) xt(i, j) *= dd.first(i, j);
  }
  return d.from_eigenbasis(xt);
}

Matrix d2_divdiff(const ScalarFunction& phi, const SpectralDecomposition& d, const Matrix& x,
                  const Matrix& y, DivDiffOptions opts) {
  spectral::require_same_dim(d.dim(), x.rows(), "d2_divdiff");
  spectral::require_same_dim(d.dim(), y.rows(), "d2_divdiff");
  phi.require_domain(d.min(), d.max());
  const DividedDifferences dd(phi, d.eigenvalues, opts);
  const Matrix xt = d.to_eigenbasis(x);
  const Matrix yt = d.to_eigenbasis(y);
  const Eigen::Index n = d.dim();
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex acc = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        acc += (xt(i, k) * yt(k, j) + yt(i, k) * xt(k, j)) * dd.second(i, k, j);
      }
      out(i, j) = acc;
    }
  }
  return d.from_eigenbasis(out);
}

RemainderTrace remainder_trace_detailed(const ScalarFunction& phi, const HermitianOperator& a,
                                        const HermitianOperator& v, int order,
                                        DivDiffOptions opts) {
  spectral::require_same_dim(a.dim(), v.dim(), "remainder_trace");
  if (order < 1 || order > 3) throw PreconditionError("remainder order must be 1, 2 or 3");
  const SpectralDecomposition d = spectral::eig(a);
  const SpectralDecomposition dp = spectral::eig(a.axpy(1.0, v));
  phi.require_domain(std::min(d.min(), dp.min()), std::max(d.max(), dp.max()));

  Complex total = 0.0;
  for (Eigen::Index k = 0; k < d.dim(); ++k) {
    total += phi.value(dp.eigenvalues(k)) - phi.value(d.eigenvalues(k));
  }
  if (order >= 2) {
    const Matrix vt = d.to_eigenbasis(v.matrix());
    const Eigen::Index n = d.dim();
    Complex d1 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) d1 += phi.derivative(d.eigenvalues(i), 1) * vt(i, i);
    total -= d1;
    if (order == 3) {
      const DividedDifferences dd(phi, d.eigenvalues, opts);
      Complex d2 = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
          d2 += 2.0 * vt(i, k) * vt(k, i) * dd.second(i, k, i);
        }
      }
      total -= 0.5 * d2;
    }
  }
  return RemainderTrace{total.real(), std::abs(total.imag())};
}

double remainder_trace(const ScalarFunction& phi, const HermitianOperator& a,
                       const HermitianOperator& v, int order, DivDiffOptions opts) {
  return remainder_trace_detailed(phi, a, v, order, opts).value;
}

SimplexRemainder remainder_simplex_poly(const HermitianOperator& a, const HermitianOperator& v,
                                        int r, int quad_order, double tol) {
  spectral::require_same_dim(a.dim(), v.dim(), "remainder_simplex_poly");
  if (r < 0) throw PreconditionError("remainder_simplex_poly: r must be non-negative");
  if (quad_order < 2) throw PreconditionError("remainder_simplex_poly: quad_order must be >= 2");
  SimplexRemainder res;
  res.quad_order = quad_order;
  if (r <= 2) return res;

  const Matrix& vm = v.matrix();
  // sum_{k=0}^{r-2} Tr[V B^{r-k-2} V B^k]
  auto chain_trace = [&](const Matrix& b) {
    const auto p = powers(b, r - 2);
    Complex acc = 0.0;
    for (int k = 0; k <= r - 2; ++k) acc += (vm * p[r - k - 2] * vm * p[k]).trace();
    return acc.real();
  };
  const double base = chain_trace(a.matrix());
  auto integrand = [&](double tau) {
    return r * (chain_trace(a.matrix() + tau * vm) - base);
  };
  res.value = quad::simplex_integral(integrand, quad::gauss_legendre(quad_order));
  res.lower_order_value =
      quad::simplex_integral(integrand, quad::gauss_legendre(std::max(1, quad_order / 2)));
  res.converged =
      std::abs(res.value - res.lower_order_value) <= tol * (1.0 + std::abs(res.value));
  return res;
}

}  // namespace frechet
}  // namespace ssf3
