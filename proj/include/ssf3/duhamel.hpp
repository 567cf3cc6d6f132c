#pragma once

#include <functional>

#include "ssf3/scalar_function.hpp"
#include "ssf3/spectral_core.hpp"
#include "ssf3/ssf_engine.hpp"

namespace ssf3 {

// phi(lambda) = int phi_hat(t) e^{i t lambda} dt, truncated to |t| <= T.
struct FourierFunction {
  static constexpr double kTailTolerance = 1e-10;

  std::function<Complex(double)> hat;
  ScalarFunction phi = ScalarFunction::monomial(0);
  double truncation = 0.0;
  int t_order = 128;
  int inner_order = 64;

  // exp(-(x - c)^2 / (2 s^2)) with phi_hat(t) = s / sqrt(2 pi) exp(-s^2 t^2 / 2 - i c t),
  // truncated at T = 12 / s. Validates the tail bound.
  static FourierFunction gaussian(double center, double width, int t_order = 128,
                                  int inner_order = 64);
  // Gaussian ScalarFunction -> FourierFunction; other variants have no explicit transform.
  static FourierFunction from_scalar(const ScalarFunction& phi, int t_order = 128,
                                     int inner_order = 64);

  // int_{|t|<=T} |phi_hat| (1 + |t|)^3 and the part beyond T.
  struct WeightedMass {
    double inside = 0.0;
    double tail = 0.0;
  };
  WeightedMass weighted_mass() const;

  // Throws DomainError if the tail exceeds kTailTolerance of the total.
  void validate() const;

  FourierFunction with_orders(int t, int inner) const;
};

struct FourierRemainder {
  double value = 0.0;
  double half_order_value = 0.0;
  double imag_residue = 0.0;
  bool converged = true;
};

namespace duhamel {

// U diag(e^{i t lambda}) U*
Matrix unitary_evolution(const SpectralDecomposition& d, double t);

// i int phi_hat(t) int_0^t e^{i beta A} X e^{i (t - beta) A} dbeta dt
Matrix d1_fourier(const FourierFunction& phi, const HermitianOperator& a, const Matrix& x);

// i^2 int phi_hat(t) int_0^t dbeta int_0^{t-beta} dnu
//   [e^{i beta A} Y e^{i nu A} X + e^{i beta A} X e^{i nu A} Y] e^{i (t-beta-nu) A}
Matrix d2_fourier(const FourierFunction& phi, const HermitianOperator& a, const Matrix& x,
                  const Matrix& y);

// i^2 int t phi_hat(t) dt int_0^t dnu int_0^1 (1 - tau)
//   Tr[V e^{i(t-nu)A_tau} V e^{i nu A_tau} - V e^{i(t-nu)A} V e^{i nu A}] dtau,
// at the configured orders and again at half of them.
FourierRemainder remainder_fourier(const FourierFunction& phi, const HermitianOperator& a,
                                   const HermitianOperator& v, int tau_order = 20,
                                   double tol = 1e-6);

// int |eta(l)| (1 + l^2)^{-(1 + eps)} dl over the grid
double weighted_l1_norm(const EtaDensity& eta, double eps);

// int_R (1 + l^2)^{-(1 + eps)} dl = sqrt(pi) Gamma(eps + 1/2) / Gamma(1 + eps)
double psi_l1_norm(double eps);

}  // namespace duhamel
}  // namespace ssf3
