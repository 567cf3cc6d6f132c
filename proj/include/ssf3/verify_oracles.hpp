#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ssf3/scalar_function.hpp"
#include "ssf3/spectral_core.hpp"
#include "ssf3/ssf_engine.hpp"

namespace ssf3 {

template <typename T>
struct PalindromeResult {
  T lhs{};
  T rhs{};
  bool equal = false;
};

struct RandomInstance {
  std::uint64_t seed = 0;
  HermitianOperator a;
  HermitianOperator v;
};

struct CrossCheckOptions {
  int quad_order = 64;
  int grid_size = 101;
  int simplex_order = 32;
  double tol = 1e-6;          // residual bound between spectral routes
  double fourier_tol = 1e-5;  // residual bound for pairs involving the Fourier route
};

struct InstanceReport {
  std::string id;
  std::vector<std::string> routes;
  std::vector<double> values;
  std::vector<std::vector<double>> residual_matrix;
  std::vector<std::string> errors;
  double max_residual = 0.0;
  bool pass = true;
};

struct CrossCheckReport {
  std::uint64_t seed = 0;
  Eigen::Index n = 0;
  std::vector<InstanceReport> instances;
  double max_residual = 0.0;
  int failures = 0;
};

namespace oracle {

// Both double sums of the palindrome identity, evaluated literally, against (n + 1) sum a_k.
PalindromeResult<long long> palindrome_sum_identity(const std::vector<long long>& a);
PalindromeResult<Complex> palindrome_sum_identity(const std::vector<Complex>& a);

// Central differences: order 1 -> (phi(A+hX) - phi(A-hX)) / 2h,
// order 2 -> (phi(A+hX) - 2 phi(A) + phi(A-hX)) / h^2.
Matrix fd_frechet(const ScalarFunction& phi, const HermitianOperator& a,
                  const HermitianOperator& x, double h, int order);

// h = 1e-5 (1 + ||A||_op) / (1 + ||X||_op)
double fd_step(const HermitianOperator& a, const HermitianOperator& x);

// eta for diagonal A = diag(a), V = diag(v): sum_i (a_i + v_i - x)^2 / 2 chi_i(x),
// right-continuous at the jumps x = a_i like the general construction.
double commuting_eta_value(const RealVector& a, const RealVector& v, double x);
EtaDensity commuting_eta_closed_form(const RealVector& a, const RealVector& v,
                                     int grid_size = 1001);

// (G + G*) / 2 with G = X + iY, X and Y standard normal.
Matrix random_hermitian(Eigen::Index n, std::mt19937_64& rng);

// A as above, V likewise rescaled to ||V||_2 = v_norm.
RandomInstance random_instance(std::uint64_t seed, Eigen::Index n, double v_norm);

// Remainder via remainder_trace, remainder_simplex_poly (polynomial phi),
// remainder_fourier (Gaussian phi) and int phi''' eta; pairwise residuals
// |x - y| / (1 + max(|x|, |y|)).
CrossCheckReport cross_check_report(const HermitianOperator& a, const HermitianOperator& v,
                                    const std::vector<ScalarFunction>& corpus,
                                    const CrossCheckOptions& opts = {}, std::uint64_t seed = 0);

}  // namespace oracle
}  // namespace ssf3
