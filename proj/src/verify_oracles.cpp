#include "ssf3/verify_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "ssf3/duhamel.hpp"
#include "ssf3/frechet.hpp"

namespace ssf3::oracle {
namespace {

template <typename T>
PalindromeResult<T> palindrome_impl(const std::vector<T>& a) {
  const std::size_t n = a.size();
  if (n == 0) throw PreconditionError("palindrome identity needs a non-empty sequence");
  for (std::size_t k = 0; k < n; ++k) {
    if (a[k] != a[n - k - 1]) {
      std::ostringstream msg;
      msg << "sequence is not a palindrome at index " << k;
      throw PreconditionError(msg.str());
    }
  }
  PalindromeResult<T> r;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n - j; ++k) r.lhs += a[k];
  }
  for (std::size_t j = 1; j <= n; ++j) {
    for (std::size_t k = 0; k < j; ++k) r.lhs += a[k];
  }
  T sum{};
  for (const T& x : a) sum += x;
  r.rhs = static_cast<T>(static_cast<double>(n + 1)) * sum;
  return r;
}

}  // namespace

PalindromeResult<long long> palindrome_sum_identity(const std::vector<long long>& a) {
  auto r = palindrome_impl(a);
  r.equal = r.lhs == r.rhs;
  return r;
}

PalindromeResult<Complex> palindrome_sum_identity(const std::vector<Complex>& a) {
  auto r = palindrome_impl(a);
  double scale = 1.0;
  for (const auto& x : a) scale = std::max(scale, std::abs(x));
  r.equal = std::abs(r.lhs - r.rhs) <= 1e-12 * scale * static_cast<double>(a.size() * a.size());
  return r;
}

Matrix fd_frechet(const ScalarFunction& phi, const HermitianOperator& a,
                  const HermitianOperator& x, double h, int order) {
  spectral::require_same_dim(a.dim(), x.dim(), "fd_frechet");
  if (!(h > 0.0)) throw PreconditionError("fd_frechet needs h > 0");
  const Matrix plus = spectral::apply_function(phi, a.axpy(h, x)).matrix();
  const Matrix minus = spectral::apply_function(phi, a.axpy(-h, x)).matrix();
  if (order == 1) return (plus - minus) / (2.0 * h);
  if (order == 2) {
    const Matrix mid = spectral::apply_function(phi, a).matrix();
    return (plus - 2.0 * mid + minus) / (h * h);
  }
  throw PreconditionError("fd_frechet order must be 1 or 2");
}

double fd_step(const HermitianOperator& a, const HermitianOperator& x) {
  return 1e-5 * (1.0 + spectral::operator_norm(a.matrix())) /
         (1.0 + spectral::operator_norm(x.matrix()));
}

double commuting_eta_value(const RealVector& a, const RealVector& v, double x) {
  if (a.size() != v.size()) throw DimensionError("commuting_eta: a and v differ in length");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double end = a(i) + v(i);
    const double q = 0.5 * (end - x) * (end - x);
    if (v(i) > 0.0 && x >= a(i) && x < end) acc += q;
    if (v(i) < 0.0 && x >= end && x < a(i)) acc -= q;
  }
  return acc;
}

EtaDensity commuting_eta_closed_form(const RealVector& a, const RealVector& v, int grid_size) {
  if (a.size() != v.size()) throw DimensionError("commuting_eta: a and v differ in length");
  if (a.size() == 0) throw DimensionError("commuting_eta: empty input");
  EtaDensity eta;
  const double vn = v.cwiseAbs().maxCoeff();
  eta.support = SupportInterval{a.minCoeff() - vn, a.maxCoeff() + vn};
  eta.grid = ssf::uniform_grid(eta.support, grid_size);
  eta.values.reserve(eta.grid.size());
  for (double x : eta.grid) eta.values.push_back(commuting_eta_value(a, v, x));
  eta.metadata.v_hs_norm = v.norm();
  eta.metadata.trace_v3 = v.array().cube().sum();
  eta.metadata.grid_size = grid_size;
  return eta;
}

Matrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return 0.5 * (g + g.adjoint());
}

RandomInstance random_instance(std::uint64_t seed, Eigen::Index n, double v_norm) {
  if (n < 1) throw DimensionError("random_instance needs n >= 1");
  if (!(v_norm >= 0.0)) throw PreconditionError("random_instance needs v_norm >= 0");
  std::mt19937_64 rng(seed);
  RandomInstance inst;
  inst.seed = seed;
  inst.a = HermitianOperator(random_hermitian(n, rng));
  Matrix v = random_hermitian(n, rng);
  const double norm = v.norm();
  if (norm > 0.0) v *= v_norm / norm;
  inst.v = HermitianOperator(v);
  return inst;
}

CrossCheckReport cross_check_report(const HermitianOperator& a, const HermitianOperator& v,
                                    const std::vector<ScalarFunction>& corpus,
                                    const CrossCheckOptions& opts, std::uint64_t seed) {
  spectral::require_same_dim(a.dim(), v.dim(), "cross_check_report");
  CrossCheckReport report;
  report.seed = seed;
  report.n = a.dim();

  EtaDensity eta;
  std::string eta_error;
  try {
    EtaOptions eo;
    eo.grid_size = opts.grid_size;
    eo.quad_order = opts.quad_order;
    eo.tol = opts.tol;
    eo.check_convergence = false;
    eta = ssf::eta_density(a, v, eo);
  } catch (const Error& e) {
    eta_error = e.what();
  }

  for (const auto& phi : corpus) {
    InstanceReport inst;
    inst.id = phi.describe();
    std::vector<double> tols;
    auto route = [&](const std::string& name, double tol, const std::function<double()>& fn) {
      try {
        const double value = fn();
        inst.routes.push_back(name);
        inst.values.push_back(value);
        tols.push_back(tol);
      } catch (const std::exception& e) {
        inst.errors.push_back(name + ": " + e.what());
      }
    };
    route("remainder_trace", opts.tol, [&] { return frechet::remainder_trace(phi, a, v, 3); });
    if (phi.is_polynomial()) {
      route("simplex_poly", opts.tol, [&] {
        const auto& c = phi.as_polynomial().coefficients;
        double acc = 0.0;
        for (std::size_t r = 3; r < c.size(); ++r) {
          if (c[r] == 0.0) continue;
          acc += c[r] *
                 frechet::remainder_simplex_poly(a, v, static_cast<int>(r), opts.simplex_order).value;
        }
        return acc;
      });
    }
    if (phi.is_gaussian()) {
      route("remainder_fourier", opts.fourier_tol, [&] {
        return duhamel::remainder_fourier(FourierFunction::from_scalar(phi), a, v).value;
      });
    }
    if (eta_error.empty()) {
      route("eta_integral", opts.tol, [&] { return ssf::integrate_third_derivative(eta, phi); });
    } else {
      inst.errors.push_back("eta_integral: " + eta_error);
    }

    const std::size_t k = inst.values.size();
    inst.residual_matrix.assign(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const double x = inst.values[i];
        const double y = inst.values[j];
        const double res = std::abs(x - y) / (1.0 + std::max(std::abs(x), std::abs(y)));
        inst.residual_matrix[i][j] = res;
        inst.max_residual = std::max(inst.max_residual, res);
        if (res > std::max(tols[i], tols[j])) inst.pass = false;
      }
    }
    if (!inst.errors.empty()) inst.pass = false;
    report.max_residual = std::max(report.max_residual, inst.max_residual);
    if (!inst.pass) ++report.failures;
    report.instances.push_back(std::move(inst));
  }
  return report;
}

}  // namespace ssf3::oracle
