#include "ssf3/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "ssf3/types.hpp"

namespace ssf3::quad {

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw PreconditionError("Gauss-Legendre order must be >= 1");
  const int n = order;
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  // Roots are symmetric; Newton on P_n for the upper half, seeded by the
  // Chebyshev-like approximation cos(pi (i + 3/4) / (n + 1/2)).
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = z;
        p0 = 1.0;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0;
    double p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = (n == 1) ? 1.0 : n * (z * p1 - p0) / (z * z - 1.0);
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    // Map [-1, 1] -> [0, 1]; ascending order.
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = 0.5 * (1.0 - z);
    x[hi] = 0.5 * (1.0 + z);
    w[lo] = 0.5 * weight;
    w[hi] = 0.5 * weight;
  }
  if (n % 2 == 1) x[static_cast<std::size_t>(n / 2)] = 0.5;
  return QuadratureRule{std::move(x), std::move(w)};
}

QuadratureRule mapped(const QuadratureRule& rule, double lo, double hi) {
  QuadratureRule out = rule;
  const double h = hi - lo;
  for (std::size_t i = 0; i < out.nodes.size(); ++i) {
    out.nodes[i] = lo + h * rule.nodes[i];
    out.weights[i] = h * rule.weights[i];
  }
  return out;
}

double simplex_integral(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double tau = rule.nodes[i];
    acc += rule.weights[i] * (1.0 - tau) * f(tau);
  }
  return acc;
}

ConvergenceResult converge_by_doubling(
    const std::function<double(const QuadratureRule&)>& integral, int base_order, double tol,
    int max_doublings) {
  if (!(tol > 0.0)) throw PreconditionError("converge_by_doubling: tol must be positive");
  ConvergenceResult res;
  int order = base_order;
  double prev = integral(gauss_legendre(order));
  res.orders_used.push_back(order);
  for (int d = 0; d < max_doublings; ++d) {
    order *= 2;
    const double cur = integral(gauss_legendre(order));
    res.orders_used.push_back(order);
    res.previous = prev;
    res.value = cur;
    res.achieved_tol = std::abs(cur - prev);
    if (res.achieved_tol <= tol) {
      res.converged = true;
      return res;
    }
    prev = cur;
  }
  return res;
}

ConvergenceResult converge_by_doubling(const std::function<double(double)>& f, int base_order,
                                       double tol, int max_doublings) {
  return converge_by_doubling(
      [&](const QuadratureRule& rule) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
        return acc;
      },
      base_order, tol, max_doublings);
}

}  // namespace ssf3::quad
