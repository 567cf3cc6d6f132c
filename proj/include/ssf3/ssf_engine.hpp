#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ssf3/quadrature.hpp"
#include "ssf3/scalar_function.hpp"
#include "ssf3/spectral_core.hpp"

namespace ssf3 {

struct SupportInterval {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

// Spectral data of one coupling node tau on the path A + tau V.
struct EtaNode {
  double tau = 0.0;
  double coefficient = 0.0;  // signed quadrature weight, (1 - tau) folded in
  RealVector eigenvalues;
  RealMatrix weights;  // m_ij = |<u_i, V u_j>|^2
};

// Exact tent representation: eta(x) = sum_nodes coefficient * sum_ij m_ij K(x; l_i, l_j).
// The last node is the tau = 0 base term carrying minus the total simplex weight.
struct EtaStructure {
  SupportInterval support;
  std::vector<EtaNode> nodes;

  // sum_nodes coefficient * sum_ij m_ij * g(l_i, l_j)
  double contract(const std::function<double(double, double)>& g) const;
};

struct EtaMetadata {
  double v_hs_norm = 0.0;  // ||V||_2
  double trace_v3 = 0.0;
  int quad_order = 0;
  int grid_size = 0;
};

// Doubling check of the tau quadrature on a smooth probe functional.
struct EtaConvergence {
  bool converged = true;
  double value = 0.0;          // probe at quad_order
  double refined_value = 0.0;  // probe at 2 * quad_order
  double tolerance = 0.0;
};

struct EtaDensity {
  std::vector<double> grid;
  std::vector<double> values;
  SupportInterval support;
  EtaMetadata metadata;
  EtaConvergence convergence;
  std::shared_ptr<const EtaStructure> structure;  // null for tabulated densities

  // Piecewise-linear interpolation of the grid values; zero outside [a, b].
  double operator()(double x) const;
};

struct EtaOptions {
  int grid_size = 1001;
  int quad_order = 64;
  double tol = 1e-6;
  bool check_convergence = true;
};

// Kernel h[lambda, mu] = (h(lambda) - h(mu)) / (lambda - mu) with confluent
// limit h'(lambda).
class DoiKernel {
 public:
  using Fn = std::function<double(double)>;
  using Divided = std::function<double(double, double)>;

  DoiKernel(Fn h, Fn h_prime, double confluence_tol = 1e-9);

  // h'' = indicator of [c, d] with h(a) = h'(a) = 0. The divided difference is
  // the exact mean of h' over [min, max], free of cancellation.
  static DoiKernel from_indicator(double a, double c, double d);
  static DoiKernel constant_one();  // h(l) = l
  static DoiKernel half_square();   // h(l) = l^2 / 2

  double h(double x) const { return h_(x); }
  double divided(double lambda, double mu) const;

 private:
  DoiKernel() = default;
  Fn h_;
  Fn h_prime_;
  Divided divided_;
  double confluence_tol_ = 1e-9;
};

struct TraceFormulaResidual {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

namespace ssf {

SupportInterval support_bounds(const HermitianOperator& a, const HermitianOperator& v);

// Tent kernel K(x; lambda, mu): 1 left of min, 0 right of max, linear between.
// For lambda == mu it is the indicator of x < lambda.
double tent_kernel(double x, double lambda, double mu);

// int_a^x K(t; lambda, mu) dt
double tent_primitive(double x, double a, double lambda, double mu);

// int_a^b t^k K(t; lambda, mu) dt, exact.
double tent_moment(int k, double a, double lambda, double mu);

EtaStructure eta_structure(const HermitianOperator& a, const HermitianOperator& v,
                           const SupportInterval& support, int quad_order);

// Pointwise eta(x) with the tau integral split at every crossing lambda_k(tau) = x,
// so the jump and kink discontinuities are integrated exactly.
std::vector<double> eta_pointwise(const HermitianOperator& a, const HermitianOperator& v,
                                  const std::vector<double>& xs, int quad_order);

EtaDensity eta_density(const HermitianOperator& a, const HermitianOperator& v,
                       const EtaOptions& opts = {});

// Uniform grid a + (b - a) i / (size - 1); widened when a == b.
std::vector<double> uniform_grid(const SupportInterval& s, int size);

double eta_moment(const EtaDensity& eta, int k);

// int phi''' eta, using int phi''' K(.; l, m) = phi'[l, m] - phi''(a).
double integrate_third_derivative(const EtaDensity& eta, const ScalarFunction& phi);

// int_c^d eta
double integrate_indicator(const EtaDensity& eta, double c, double d);

// int |eta| w over the grid: piecewise linear with exact sign changes, and
// cells holding a jump of eta (an eigenvalue of A) split at the jump.
double weighted_abs_integral(const EtaDensity& eta, const std::function<double(double)>& weight);

double l1_norm(const EtaDensity& eta);

TraceFormulaResidual trace_formula_residual(const HermitianOperator& a,
                                            const HermitianOperator& v,
                                            const ScalarFunction& phi, const EtaDensity& eta);

// sum_ij h[lambda_i, mu_j] |<u_i, V w_j>|^2
double doi_trace(const SpectralDecomposition& left, const SpectralDecomposition& right,
                 const HermitianOperator& v, const DoiKernel& kernel);

// int_0^1 (1 - tau) [doi_trace(A_tau) - doi_trace(A)] dtau with Gauss-Legendre.
double doi_simplex_difference(const HermitianOperator& a, const HermitianOperator& v,
                              const DoiKernel& kernel, int quad_order);

}  // namespace ssf
}  // namespace ssf3
