#pragma once

#include <functional>
#include <vector>

namespace ssf3 {

// Gauss-Legendre rule mapped to [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int order() const { return static_cast<int>(nodes.size()); }
};

struct ConvergenceResult {
  double value = 0.0;
  double previous = 0.0;      // value at the preceding order
  double achieved_tol = 0.0;  // |I(2k) - I(k)| at the last doubling
  std::vector<int> orders_used;
  bool converged = false;
};

namespace quad {

QuadratureRule gauss_legendre(int order);

// Rule on [lo, hi] (affine image of the [0,1] rule).
QuadratureRule mapped(const QuadratureRule& rule, double lo, double hi);

// int_0^1 int_0^s F(tau) dtau ds = int_0^1 (1 - tau) F(tau) dtau
double simplex_integral(const std::function<double(double)>& f, const QuadratureRule& rule);

// Evaluates integral(rule) at base_order, 2*base_order, ... and stops once two
// successive values agree to tol; gives up after max_doublings doublings.
ConvergenceResult converge_by_doubling(
    const std::function<double(const QuadratureRule&)>& integral, int base_order, double tol,
    int max_doublings = 3);

// Plain int_0^1 f convenience overload.
ConvergenceResult converge_by_doubling(const std::function<double(double)>& f, int base_order,
                                       double tol, int max_doublings = 3);

}  // namespace quad
}  // namespace ssf3
