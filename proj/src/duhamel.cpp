#include "ssf3/duhamel.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ssf3/quadrature.hpp"

namespace ssf3 {
namespace {

constexpr Complex kI(0.0, 1.0);

void require_orders(int t_order, int inner_order) {
  if (t_order < 2 || inner_order < 2) {
    throw PreconditionError("Fourier quadrature orders must be >= 2");
  }
}

ComplexVector phases(const RealVector& lambda, double t) {
  ComplexVector out(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) out(k) = std::polar(1.0, t * lambda(k));
  return out;
}

}  // namespace

FourierFunction FourierFunction::gaussian(double center, double width, int t_order,
                                          int inner_order) {
  if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(center)) {
    throw PreconditionError("Gaussian packet needs finite center and positive width");
  }
  require_orders(t_order, inner_order);
  FourierFunction f;
  const double norm = width / std::sqrt(2.0 * std::numbers::pi);
  f.hat = [=](double t) {
    return norm * std::exp(-0.5 * width * width * t * t) * std::polar(1.0, -center * t);
  };
  f.phi = ScalarFunction::gaussian(center, width);
  f.truncation = 12.0 / width;
  f.t_order = t_order;
  f.inner_order = inner_order;
  f.validate();
  return f;
}

FourierFunction FourierFunction::from_scalar(const ScalarFunction& phi, int t_order,
                                             int inner_order) {
  if (!phi.is_gaussian()) {
    throw PreconditionError("Fourier route needs a function with an explicit transform (gauss)");
  }
  const auto& g = phi.as_gaussian();
  return gaussian(g.center, g.width, t_order, inner_order);
}

FourierFunction::WeightedMass FourierFunction::weighted_mass() const {
  const QuadratureRule base = quad::gauss_legendre(64);
  auto integrate = [&](double lo, double hi) {
    const QuadratureRule r = quad::mapped(base, lo, hi);
    double acc = 0.0;
    for (int i = 0; i < r.order(); ++i) {
      const double t = r.nodes[static_cast<std::size_t>(i)];
      const double w = 1.0 + std::abs(t);
      acc += r.weights[static_cast<std::size_t>(i)] * std::abs(hat(t)) * w * w * w;
    }
    return acc;
  };
  const double t = truncation;
  WeightedMass m;
  m.inside = integrate(-t, 0.0) + integrate(0.0, t);
  // Tail sampled out to 5T on each side, in panels of width T.
  for (int p = 1; p < 5; ++p) {
    m.tail += integrate(p * t, (p + 1) * t) + integrate(-(p + 1) * t, -p * t);
  }
  return m;
}

void FourierFunction::validate() const {
  if (!hat) throw PreconditionError("Fourier function has no transform");
  if (!(truncation > 0.0)) throw PreconditionError("Fourier truncation must be positive");
  const WeightedMass m = weighted_mass();
  if (!(m.tail <= kTailTolerance * (m.inside + m.tail))) {
    std::ostringstream msg;
    msg << "tail bound violated at T = " << truncation << ": tail " << m.tail << " vs total "
        << m.inside + m.tail;
    throw DomainError(msg.str());
  }
}

FourierFunction FourierFunction::with_orders(int t, int inner) const {
  require_orders(t, inner);
  FourierFunction out = *this;
  out.t_order = t;
  out.inner_order = inner;
  return out;
}

namespace duhamel {

Matrix unitary_evolution(const SpectralDecomposition& d, double t) {
  return d.eigenvectors * phases(d.eigenvalues, t).asDiagonal() * d.eigenvectors.adjoint();
}

Matrix d1_fourier(const FourierFunction& phi, const HermitianOperator& a, const Matrix& x) {
  spectral::require_same_dim(a.dim(), x.rows(), "d1_fourier");
  spectral::require_same_dim(a.dim(), x.cols(), "d1_fourier");
  const SpectralDecomposition d = spectral::eig(a);
  const Eigen::Index n = d.dim();
  const double T = phi.truncation;
  const QuadratureRule tr = quad::mapped(quad::gauss_legendre(phi.t_order), -T, T);
  const QuadratureRule inner = quad::gauss_legendre(phi.inner_order);

  // J_ij = i int phi_hat(t) int_0^t e^{i beta l_i} e^{i (t - beta) l_j} dbeta dt
  Matrix j = Matrix::Zero(n, n);
  for (int a_i = 0; a_i < tr.order(); ++a_i) {
    const double t = tr.nodes[static_cast<std::size_t>(a_i)];
    const Complex wt = tr.weights[static_cast<std::size_t>(a_i)] * phi.hat(t) * kI * t;
    for (int b_i = 0; b_i < inner.order(); ++b_i) {
      const double s = inner.nodes[static_cast<std::size_t>(b_i)];
      const Complex w = wt * inner.weights[static_cast<std::size_t>(b_i)];
      const ComplexVector p = phases(d.eigenvalues, s * t);
      const ComplexVector q = phases(d.eigenvalues, (1.0 - s) * t);
      j.noalias() += w * (p * q.transpose());
    }
  }
  return d.from_eigenbasis(d.to_eigenbasis(x).cwiseProduct(j));
}

Matrix d2_fourier(const FourierFunction& phi, const HermitianOperator& a, const Matrix& x,
                  const Matrix& y) {
  spectral::require_same_dim(a.dim(), x.rows(), "d2_fourier");
  spectral::require_same_dim(a.dim(), y.rows(), "d2_fourier");
  const SpectralDecomposition d = spectral::eig(a);
  const Eigen::Index n = d.dim();
  const RealVector& lam = d.eigenvalues;
  const double T = phi.truncation;
  const QuadratureRule tr = quad::mapped(quad::gauss_legendre(phi.t_order), -T, T);
  const QuadratureRule inner = quad::gauss_legendre(phi.inner_order);

  // K[k](i, j) = i^2 int phi_hat int_0^t dbeta int_0^{t-beta} dnu
  //              e^{i beta l_i} e^{i nu l_k} e^{i (t - beta - nu) l_j}
  std::vector<Matrix> kern(static_cast<std::size_t>(n), Matrix::Zero(n, n));
  Matrix inner_kj(n, n);
  for (int a_i = 0; a_i < tr.order(); ++a_i) {
    const double t = tr.nodes[static_cast<std::size_t>(a_i)];
    const Complex wt = -tr.weights[static_cast<std::size_t>(a_i)] * phi.hat(t) * t;
    for (int b_i = 0; b_i < inner.order(); ++b_i) {
      const double beta = inner.nodes[static_cast<std::size_t>(b_i)] * t;
      const double rest = t - beta;
      const Complex wb = wt * inner.weights[static_cast<std::size_t>(b_i)] * rest;
      // I_kj = int_0^1 e^{i nu l_k} e^{i (rest - nu) l_j} ds, nu = rest * s
      const ComplexVector tail = phases(lam, rest);
      inner_kj.setZero();
      for (int c_i = 0; c_i < inner.order(); ++c_i) {
        const double nu = inner.nodes[static_cast<std::size_t>(c_i)] * rest;
        const ComplexVector w = phases(lam, nu);
        const ComplexVector r = tail.cwiseProduct(w.conjugate());
        inner_kj.noalias() += inner.weights[static_cast<std::size_t>(c_i)] * (w * r.transpose());
      }
      const ComplexVector p = phases(lam, beta);
      for (Eigen::Index k = 0; k < n; ++k) {
        kern[static_cast<std::size_t>(k)].noalias() += wb * (p * inner_kj.row(k));
      }
    }
  }

  const Matrix xt = d.to_eigenbasis(x);
  const Matrix yt = d.to_eigenbasis(y);
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex acc = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        acc += (yt(i, k) * xt(k, j) + xt(i, k) * yt(k, j)) * kern[static_cast<std::size_t>(k)](i, j);
      }
      out(i, j) = acc;
    }
  }
  return d.from_eigenbasis(out);
}

namespace {

// F(B) = i^2 int t phi_hat(t) int_0^t Tr[V e^{i(t-nu)B} V e^{i nu B}] dnu dt
Complex duhamel_trace(const FourierFunction& phi, const SpectralDecomposition& d,
                      const HermitianOperator& v, const QuadratureRule& tr,
                      const QuadratureRule& inner) {
  const RealMatrix m = spectral::pair_measure(d, v).weights;
  const RealVector& lam = d.eigenvalues;
  Complex acc = 0.0;
  for (int a_i = 0; a_i < tr.order(); ++a_i) {
    const double t = tr.nodes[static_cast<std::size_t>(a_i)];
    const Complex wt = -tr.weights[static_cast<std::size_t>(a_i)] * phi.hat(t) * t * t;
    const ComplexVector full = phases(lam, t);
    Complex inner_acc = 0.0;
    for (int c_i = 0; c_i < inner.order(); ++c_i) {
      const double nu = inner.nodes[static_cast<std::size_t>(c_i)] * t;
      const ComplexVector q = phases(lam, nu);
      const ComplexVector p = full.cwiseProduct(q.conjugate());
      // sum_ij m_ij e^{i(t-nu) l_i} e^{i nu l_j}
      inner_acc += inner.weights[static_cast<std::size_t>(c_i)] *
                   (p.transpose() * m.cast<Complex>() * q)(0, 0);
    }
    acc += wt * inner_acc;
  }
  return acc;
}

Complex remainder_at(const FourierFunction& phi, const HermitianOperator& a,
                     const HermitianOperator& v, int tau_order) {
  const double T = phi.truncation;
  const QuadratureRule tr = quad::mapped(quad::gauss_legendre(phi.t_order), -T, T);
  const QuadratureRule inner = quad::gauss_legendre(phi.inner_order);
  const QuadratureRule tau_rule = quad::gauss_legendre(tau_order);
  const Complex base = duhamel_trace(phi, spectral::eig(a), v, tr, inner);
  Complex acc = 0.0;
  for (int i = 0; i < tau_rule.order(); ++i) {
    const double tau = tau_rule.nodes[static_cast<std::size_t>(i)];
    const double w = tau_rule.weights[static_cast<std::size_t>(i)] * (1.0 - tau);
    acc += w * (duhamel_trace(phi, spectral::eig(a.axpy(tau, v)), v, tr, inner) - base);
  }
  return acc;
}

}  // namespace

FourierRemainder remainder_fourier(const FourierFunction& phi, const HermitianOperator& a,
                                   const HermitianOperator& v, int tau_order, double tol) {
  spectral::require_same_dim(a.dim(), v.dim(), "remainder_fourier");
  if (tau_order < 2) throw PreconditionError("tau_order must be >= 2");
  const Complex full = remainder_at(phi, a, v, tau_order);
  const FourierFunction coarse =
      phi.with_orders(std::max(2, phi.t_order / 2), std::max(2, phi.inner_order / 2));
  const Complex half = remainder_at(coarse, a, v, std::max(2, tau_order / 2));
  FourierRemainder r;
  r.value = full.real();
  r.half_order_value = half.real();
  r.imag_residue = std::abs(full.imag());
  r.converged = std::abs(r.value - r.half_order_value) <= tol * (1.0 + std::abs(r.value));
  return r;
}

double weighted_l1_norm(const EtaDensity& eta, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("weighted_l1_norm needs eps > 0");
  return ssf::weighted_abs_integral(
      eta, [eps](double x) { return std::pow(1.0 + x * x, -(1.0 + eps)); });
}

double psi_l1_norm(double eps) {
  if (!(eps > 0.0)) throw PreconditionError("psi_l1_norm needs eps > 0");
  return std::sqrt(std::numbers::pi) * std::exp(std::lgamma(eps + 0.5) - std::lgamma(1.0 + eps));
}

}  // namespace duhamel
}  // namespace ssf3
