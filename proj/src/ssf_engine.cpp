#include "ssf3/ssf_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ssf3/frechet.hpp"

namespace ssf3 {

double EtaStructure::contract(const std::function<double(double, double)>& g) const {
  double total = 0.0;
  for (const auto& node : nodes) {
    const Eigen::Index n = node.eigenvalues.size();
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        const double m = node.weights(i, j);
        if (m != 0.0) acc += m * g(node.eigenvalues(i), node.eigenvalues(j));
      }
    }
    total += node.coefficient * acc;
  }
  return total;
}

double EtaDensity::operator()(double x) const {
  if (grid.empty() || x < support.a || x > support.b) return 0.0;
  if (x <= grid.front()) return x == grid.front() ? values.front() : 0.0;
  if (x >= grid.back()) return x == grid.back() ? values.back() : 0.0;
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const auto hi = static_cast<std::size_t>(it - grid.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
  return (1.0 - t) * values[lo] + t * values[hi];
}

DoiKernel::DoiKernel(Fn h, Fn h_prime, double confluence_tol)
    : h_(std::move(h)), h_prime_(std::move(h_prime)), confluence_tol_(confluence_tol) {}

double DoiKernel::divided(double lambda, double mu) const {
  if (divided_) return divided_(lambda, mu);
  const double scale = std::max({1.0, std::abs(lambda), std::abs(mu)});
  if (std::abs(lambda - mu) <= confluence_tol_ * scale) return h_prime_(0.5 * (lambda + mu));
  return (h_(lambda) - h_(mu)) / (lambda - mu);
}

DoiKernel DoiKernel::from_indicator(double a, double c, double d) {
  if (d < c) throw PreconditionError("indicator kernel needs c <= d");
  c = std::max(c, a);
  d = std::max(d, a);
  auto g = [c, d](double x) { return std::clamp(x, c, d) - c; };
  DoiKernel k;
  k.h_prime_ = g;
  k.h_ = [c, d](double x) {
    if (x <= c) return 0.0;
    if (x <= d) return 0.5 * (x - c) * (x - c);
    return 0.5 * (d - c) * (d - c) + (d - c) * (x - d);
  };
  k.divided_ = [c, d, g](double lambda, double mu) {
    const double l = std::min(lambda, mu);
    const double u = std::max(lambda, mu);
    const double len = u - l;
    if (!(len > 0.0)) return g(l);
    // Mean of the piecewise-linear g over [l, u], segment by segment.
    double mean = 0.0;
    const double x1 = std::clamp(l, c, d);
    const double x2 = std::clamp(u, c, d);
    if (x2 > x1) mean += (x2 - x1) / len * (0.5 * (x1 + x2) - c);
    if (u > d) mean += (u - std::max(l, d)) / len * (d - c);
    return mean;
  };
  return k;
}

DoiKernel DoiKernel::constant_one() {
  DoiKernel k([](double x) { return x; }, [](double) { return 1.0; });
  k.divided_ = [](double, double) { return 1.0; };
  return k;
}

DoiKernel DoiKernel::half_square() {
  DoiKernel k([](double x) { return 0.5 * x * x; }, [](double x) { return x; });
  k.divided_ = [](double lambda, double mu) { return 0.5 * (lambda + mu); };
  return k;
}

namespace ssf {
namespace {

constexpr int kPanelNodes = 8;

// Gauss-Legendre rules for the tent moments, cached by order.
const QuadratureRule& moment_rule(int order) {
  static const std::vector<QuadratureRule> table = [] {
    std::vector<QuadratureRule> t;
    for (int q = 1; q <= 64; ++q) t.push_back(quad::gauss_legendre(q));
    return t;
  }();
  if (order <= static_cast<int>(table.size())) return table[static_cast<std::size_t>(order - 1)];
  thread_local QuadratureRule extra;
  if (extra.order() != order) extra = quad::gauss_legendre(order);
  return extra;
}

double tent_sum(double x, const RealVector& lam, const RealMatrix& m) {
  const Eigen::Index n = lam.size();
  double acc = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double w = m(i, j);
      if (w != 0.0) acc += w * tent_kernel(x, lam(i), lam(j));
    }
  }
  return acc;
}

struct PathSample {
  double tau = 0.0;
  double weight = 0.0;  // includes (1 - tau)
  RealVector lam;
  RealMatrix m;
};

struct Panel {
  double t0 = 0.0;
  double t1 = 0.0;
  RealVector lam0;
  RealVector lam1;
  std::vector<PathSample> samples;
};

class PathEvaluator {
 public:
  PathEvaluator(const HermitianOperator& a, const HermitianOperator& v, int quad_order)
      : a_(a), v_(v), rule_(quad::gauss_legendre(std::min(kPanelNodes, quad_order))) {
    const int panels = std::max(1, quad_order / kPanelNodes);
    std::vector<RealVector> ends;
    for (int p = 0; p <= panels; ++p) {
      ends.push_back(spectral::eig(a_.axpy(static_cast<double>(p) / panels, v_)).eigenvalues);
    }
    for (int p = 0; p < panels; ++p) {
      Panel panel;
      panel.t0 = static_cast<double>(p) / panels;
      panel.t1 = static_cast<double>(p + 1) / panels;
      panel.lam0 = ends[static_cast<std::size_t>(p)];
      panel.lam1 = ends[static_cast<std::size_t>(p + 1)];
      panel.samples = sample(panel.t0, panel.t1);
      panels_.push_back(std::move(panel));
    }
    const SpectralDecomposition d0 = spectral::eig(a_);
    base_lam_ = d0.eigenvalues;
    base_m_ = spectral::pair_measure(d0, v_).weights;
  }

  double eval(double x) const {
    double total = 0.0;
    for (const auto& panel : panels_) {
      std::vector<double> roots;
      for (Eigen::Index k = 0; k < panel.lam0.size(); ++k) {
        const bool s0 = panel.lam0(k) > x;
        const bool s1 = panel.lam1(k) > x;
        if (s0 != s1) roots.push_back(find_root(panel, k, x));
      }
      if (roots.empty()) {
        for (const auto& s : panel.samples) total += s.weight * tent_sum(x, s.lam, s.m);
        continue;
      }
      std::sort(roots.begin(), roots.end());
      std::vector<double> cuts{panel.t0};
      for (double r : roots) {
        if (r - cuts.back() > 1e-15) cuts.push_back(r);
      }
      if (panel.t1 - cuts.back() > 1e-15) {
        cuts.push_back(panel.t1);
      } else {
        cuts.back() = panel.t1;
      }
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        for (const auto& s : sample(cuts[c], cuts[c + 1])) total += s.weight * tent_sum(x, s.lam, s.m);
      }
    }
    return total - 0.5 * tent_sum(x, base_lam_, base_m_);
  }

 private:
  std::vector<PathSample> sample(double lo, double hi) const {
    std::vector<PathSample> out;
    const QuadratureRule r = quad::mapped(rule_, lo, hi);
    for (int i = 0; i < r.order(); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const SpectralDecomposition d = spectral::eig(a_.axpy(r.nodes[idx], v_));
      out.push_back(PathSample{r.nodes[idx], r.weights[idx] * (1.0 - r.nodes[idx]), d.eigenvalues,
                               spectral::pair_measure(d, v_).weights});
    }
    return out;
  }

  // Root of lambda_k(tau) = x inside the panel: Newton with the Hellmann-Feynman
  // slope <u_k, V u_k>, safeguarded by bisection.
  double find_root(const Panel& panel, Eigen::Index k, double x) const {
    double lo = panel.t0;
    double hi = panel.t1;
    double f_lo = panel.lam0(k) - x;
    const double f_hi = panel.lam1(k) - x;
    if (f_lo == 0.0) return lo;
    const bool rising = f_hi > f_lo;
    double tau = lo + (hi - lo) * f_lo / (f_lo - f_hi);
    const double scale = std::max(1.0, std::abs(x));
    for (int iter = 0; iter < 60; ++iter) {
      const SpectralDecomposition d = spectral::eig(a_.axpy(tau, v_));
      const double f = d.eigenvalues(k) - x;
      if (std::abs(f) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) return tau;
      if ((f < 0.0) == rising) {
        lo = tau;
        f_lo = f;
      } else {
        hi = tau;
      }
      if (hi - lo <= 1e-15) return 0.5 * (lo + hi);
      const auto u = d.eigenvectors.col(k);
      const double slope = (u.adjoint() * v_.matrix() * u)(0, 0).real();
      double next = slope != 0.0 ? tau - f / slope : lo - 1.0;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      tau = next;
    }
    return tau;
  }

  const HermitianOperator& a_;
  const HermitianOperator& v_;
  QuadratureRule rule_;
  std::vector<Panel> panels_;
  RealVector base_lam_;
  RealMatrix base_m_;
};

void require_orders(int grid_size, int quad_order) {
  if (grid_size < 2) throw PreconditionError("grid_size must be >= 2");
  if (quad_order < 2) throw PreconditionError("quad_order must be >= 2");
}

double third_derivative_pair(const ScalarFunction& phi, double lambda, double mu) {
  const double l = std::min(lambda, mu);
  const double u = std::max(lambda, mu);
  const double scale = std::max({1.0, std::abs(l), std::abs(u)});
  if (u - l <= 1e-5 * scale) return phi.derivative(0.5 * (l + u), 2);
  return (phi.derivative(u, 1) - phi.derivative(l, 1)) / (u - l);
}

}  // namespace

SupportInterval support_bounds(const HermitianOperator& a, const HermitianOperator& v) {
  spectral::require_same_dim(a.dim(), v.dim(), "support_bounds");
  const SpectralDecomposition d = spectral::eig(a);
  const double vn = spectral::operator_norm(v.matrix());
  return SupportInterval{d.min() - vn, d.max() + vn};
}

double tent_kernel(double x, double lambda, double mu) {
  const double l = std::min(lambda, mu);
  const double u = std::max(lambda, mu);
  if (x >= u) return 0.0;
  if (x <= l) return 1.0;
  return (u - x) / (u - l);
}

double tent_primitive(double x, double a, double lambda, double mu) {
  const double l = std::min(lambda, mu);
  const double u = std::max(lambda, mu);
  if (x <= l) return x - a;
  if (x >= u) return (l - a) + 0.5 * (u - l);
  const double s = x - l;
  return (l - a) + s - 0.5 * s * s / (u - l);
}

double tent_moment(int k, double a, double lambda, double mu) {
  if (k < 0) throw PreconditionError("moment order must be non-negative");
  const double l = std::min(lambda, mu);
  const double u = std::max(lambda, mu);
  const double kp = k + 1.0;
  double out = (std::pow(l, kp) - std::pow(a, kp)) / kp;
  const double len = u - l;
  if (len > 0.0) {
    // Integrand has degree k + 1 in s.
    const QuadratureRule& r = moment_rule(k / 2 + 2);
    double acc = 0.0;
    for (int i = 0; i < r.order(); ++i) {
      const double s = r.nodes[static_cast<std::size_t>(i)];
      acc += r.weights[static_cast<std::size_t>(i)] * std::pow(l + s * len, k) * (1.0 - s);
    }
    out += len * acc;
  }
  return out;
}

EtaStructure eta_structure(const HermitianOperator& a, const HermitianOperator& v,
                           const SupportInterval& support, int quad_order) {
  spectral::require_same_dim(a.dim(), v.dim(), "eta_structure");
  if (quad_order < 2) throw PreconditionError("quad_order must be >= 2");
  const QuadratureRule rule = quad::gauss_legendre(quad_order);
  EtaStructure s;
  s.support = support;
  double total = 0.0;
  for (int i = 0; i < rule.order(); ++i) {
    const double tau = rule.nodes[static_cast<std::size_t>(i)];
    const double c = rule.weights[static_cast<std::size_t>(i)] * (1.0 - tau);
    const SpectralDecomposition d = spectral::eig(a.axpy(tau, v));
    s.nodes.push_back(EtaNode{tau, c, d.eigenvalues, spectral::pair_measure(d, v).weights});
    total += c;
  }
  const SpectralDecomposition d0 = spectral::eig(a);
  s.nodes.push_back(EtaNode{0.0, -total, d0.eigenvalues, spectral::pair_measure(d0, v).weights});
  return s;
}

std::vector<double> eta_pointwise(const HermitianOperator& a, const HermitianOperator& v,
                                  const std::vector<double>& xs, int quad_order) {
  spectral::require_same_dim(a.dim(), v.dim(), "eta_pointwise");
  if (quad_order < 2) throw PreconditionError("quad_order must be >= 2");
  const PathEvaluator path(a, v, quad_order);
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(path.eval(x));
  return out;
}

std::vector<double> uniform_grid(const SupportInterval& s, int size) {
  if (size < 2) throw PreconditionError("grid_size must be >= 2");
  double lo = s.a;
  double hi = s.b;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> g(static_cast<std::size_t>(size));
  const double len = hi - lo;
  for (int i = 0; i < size; ++i) {
    g[static_cast<std::size_t>(i)] = lo + len * (static_cast<double>(i) / (size - 1));
  }
  g.back() = hi;
  return g;
}

EtaDensity eta_density(const HermitianOperator& a, const HermitianOperator& v,
                       const EtaOptions& opts) {
  require_orders(opts.grid_size, opts.quad_order);
  spectral::require_same_dim(a.dim(), v.dim(), "eta_density");
  EtaDensity eta;
  eta.support = support_bounds(a, v);
  eta.structure = std::make_shared<const EtaStructure>(
      eta_structure(a, v, eta.support, opts.quad_order));
  eta.grid = uniform_grid(eta.support, opts.grid_size);
  eta.values = eta_pointwise(a, v, eta.grid, opts.quad_order);
  for (std::size_t i = 0; i < eta.grid.size(); ++i) {
    if (eta.grid[i] < eta.support.a || eta.grid[i] > eta.support.b) eta.values[i] = 0.0;
  }

  eta.metadata.v_hs_norm = v.matrix().norm();
  eta.metadata.trace_v3 = (v.matrix() * v.matrix() * v.matrix()).trace().real();
  eta.metadata.quad_order = opts.quad_order;
  eta.metadata.grid_size = opts.grid_size;

  eta.convergence.tolerance = opts.tol;
  if (opts.check_convergence) {
    // Smooth probe centred on the support; compares quad_order with its double.
    const double mid = 0.5 * (eta.support.a + eta.support.b);
    const double width = eta.support.length() > 0.0 ? 0.25 * eta.support.length() : 1.0;
    const ScalarFunction probe = ScalarFunction::gaussian(mid, width);
    EtaDensity refined;
    refined.support = eta.support;
    refined.structure = std::make_shared<const EtaStructure>(
        eta_structure(a, v, eta.support, 2 * opts.quad_order));
    eta.convergence.value = integrate_third_derivative(eta, probe);
    eta.convergence.refined_value = integrate_third_derivative(refined, probe);
    eta.convergence.converged = std::abs(eta.convergence.value - eta.convergence.refined_value) <=
                                opts.tol * (1.0 + std::abs(eta.convergence.refined_value));
  }
  return eta;
}

double eta_moment(const EtaDensity& eta, int k) {
  if (k < 0) throw PreconditionError("moment order must be non-negative");
  if (eta.structure) {
    const double a = eta.structure->support.a;
    return eta.structure->contract(
        [&](double lambda, double mu) { return tent_moment(k, a, lambda, mu); });
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < eta.grid.size(); ++i) {
    const double x0 = eta.grid[i];
    const double x1 = eta.grid[i + 1];
    acc += 0.5 * (x1 - x0) * (std::pow(x0, k) * eta.values[i] + std::pow(x1, k) * eta.values[i + 1]);
  }
  return acc;
}

double integrate_third_derivative(const EtaDensity& eta, const ScalarFunction& phi) {
  if (eta.structure) {
    const double a = eta.structure->support.a;
    const double base = phi.derivative(a, 2);
    return eta.structure->contract([&](double lambda, double mu) {
      return third_derivative_pair(phi, lambda, mu) - base;
    });
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < eta.grid.size(); ++i) {
    const double x0 = eta.grid[i];
    const double x1 = eta.grid[i + 1];
    acc += 0.5 * (x1 - x0) *
           (phi.derivative(x0, 3) * eta.values[i] + phi.derivative(x1, 3) * eta.values[i + 1]);
  }
  return acc;
}

double integrate_indicator(const EtaDensity& eta, double c, double d) {
  if (d < c) throw PreconditionError("integrate_indicator needs c <= d");
  c = std::clamp(c, eta.support.a, eta.support.b);
  d = std::clamp(d, eta.support.a, eta.support.b);
  if (d <= c) return 0.0;
  if (eta.structure) {
    const double a = eta.structure->support.a;
    return eta.structure->contract([&](double lambda, double mu) {
      return tent_primitive(d, a, lambda, mu) - tent_primitive(c, a, lambda, mu);
    });
  }
  // Trapezoid on the piecewise-linear interpolant, clipped to [c, d].
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < eta.grid.size(); ++i) {
    const double x0 = std::max(eta.grid[i], c);
    const double x1 = std::min(eta.grid[i + 1], d);
    if (x1 > x0) acc += 0.5 * (x1 - x0) * (eta(x0) + eta(x1));
  }
  return acc;
}

namespace {

// Trapezoid of |y| w on [p, q] for y linear, split at a sign change.
double abs_piece(double p, double q, double yp, double yq, const std::function<double(double)>& w) {
  if (q <= p) return 0.0;
  if ((yp < 0.0) != (yq < 0.0) && yp != 0.0 && yq != 0.0) {
    const double z = p + (q - p) * yp / (yp - yq);
    return 0.5 * (z - p) * std::abs(yp) * w(p) + 0.5 * (q - z) * std::abs(yq) * w(q);
  }
  return 0.5 * (q - p) * (std::abs(yp) * w(p) + std::abs(yq) * w(q));
}

}  // namespace

double weighted_abs_integral(const EtaDensity& eta, const std::function<double(double)>& weight) {
  const auto& x = eta.grid;
  const auto& y = eta.values;
  const std::size_t n = x.size();
  // eta jumps at the eigenvalues of A (the tau = 0 node); grid values are right limits.
  std::vector<double> jumps;
  if (eta.structure && !eta.structure->nodes.empty()) {
    const RealVector& lam = eta.structure->nodes.back().eigenvalues;
    jumps.assign(lam.data(), lam.data() + lam.size());
    std::sort(jumps.begin(), jumps.end());
  }
  auto extrapolate = [&](std::size_t i, std::size_t j, double at) {
    return y[i] + (y[j] - y[i]) * (at - x[i]) / (x[j] - x[i]);
  };
  double acc = 0.0;
  auto it = jumps.begin();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double x0 = x[i], x1 = x[i + 1];
    while (it != jumps.end() && *it <= x0) ++it;
    auto end = it;
    while (end != jumps.end() && *end <= x1) ++end;
    if (end - it != 1) {
      // No jump, or several inside one cell: plain piecewise linear.
      acc += abs_piece(x0, x1, y[i], y[i + 1], weight);
      continue;
    }
    const double s = *it;
    const double left = i > 0 ? extrapolate(i - 1, i, s) : y[i];
    const double right = s < x1 ? (i + 2 < n ? extrapolate(i + 1, i + 2, s) : y[i + 1]) : y[i + 1];
    acc += abs_piece(x0, s, y[i], left, weight) + abs_piece(s, x1, right, y[i + 1], weight);
  }
  return acc;
}

double l1_norm(const EtaDensity& eta) {
  return weighted_abs_integral(eta, [](double) { return 1.0; });
}

TraceFormulaResidual trace_formula_residual(const HermitianOperator& a,
                                            const HermitianOperator& v,
                                            const ScalarFunction& phi, const EtaDensity& eta) {
  TraceFormulaResidual r;
  r.lhs = frechet::remainder_trace(phi, a, v, 3);
  r.rhs = integrate_third_derivative(eta, phi);
  r.residual = std::abs(r.lhs - r.rhs) / (1.0 + std::abs(r.lhs));
  return r;
}

double doi_trace(const SpectralDecomposition& left, const SpectralDecomposition& right,
                 const HermitianOperator& v, const DoiKernel& kernel) {
  const PairMeasure pm = spectral::pair_measure(left, right, v);
  double acc = 0.0;
  for (Eigen::Index j = 0; j < pm.right.size(); ++j) {
    for (Eigen::Index i = 0; i < pm.left.size(); ++i) {
      const double m = pm.weights(i, j);
      if (m != 0.0) acc += m * kernel.divided(pm.left(i), pm.right(j));
    }
  }
  return acc;
}

double doi_simplex_difference(const HermitianOperator& a, const HermitianOperator& v,
                              const DoiKernel& kernel, int quad_order) {
  spectral::require_same_dim(a.dim(), v.dim(), "doi_simplex_difference");
  const QuadratureRule rule = quad::gauss_legendre(quad_order);
  double acc = 0.0;
  double total = 0.0;
  for (int i = 0; i < rule.order(); ++i) {
    const double tau = rule.nodes[static_cast<std::size_t>(i)];
    const double c = rule.weights[static_cast<std::size_t>(i)] * (1.0 - tau);
    const SpectralDecomposition d = spectral::eig(a.axpy(tau, v));
    acc += c * doi_trace(d, d, v, kernel);
    total += c;
  }
  const SpectralDecomposition d0 = spectral::eig(a);
  return acc - total * doi_trace(d0, d0, v, kernel);
}

}  // namespace ssf
}  // namespace ssf3
