#include "ssf3/scalar_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ssf3 {

NonHermitianError::NonHermitianError(double violation, double scale)
    : PreconditionError("matrix is not Hermitian: max |a_ij - conj(a_ji)| = " +
                        std::to_string(violation) + " (entry scale " + std::to_string(scale) +
                        ")"),
      violation_(violation) {}

ParseError::ParseError(std::size_t position, const std::string& message)
    : Error("parse error at index " + std::to_string(position) + ": " + message),
      position_(position) {}

namespace {

double eval_polynomial(const std::vector<double>& c, double x, int order) {
  const int n = static_cast<int>(c.size());
  if (order >= n) return 0.0;
  double acc = 0.0;
  for (int k = n - 1; k >= order; --k) {
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= static_cast<double>(k - j);
    acc = acc * x + c[static_cast<std::size_t>(k)] * falling;
  }
  return acc;
}

// d^n/dx^n exp(-u^2/2), u = (x - c)/s, equals (-1)^n He_n(u) exp(-u^2/2) / s^n
// with He the probabilists' Hermite polynomials.
double eval_gaussian(const GaussianPacket& g, double x, int order) {
  const double u = (x - g.center) / g.width;
  double he_prev = 1.0;
  double he = u;
  if (order == 0) {
    he = 1.0;
  } else {
    for (int k = 1; k < order; ++k) {
      const double next = u * he - k * he_prev;
      he_prev = he;
      he = next;
    }
  }
  const double sign = (order % 2 == 0) ? 1.0 : -1.0;
  return sign * he * std::exp(-0.5 * u * u) / std::pow(g.width, order);
}

double eval_grid(const GridFunction& g, double x, int order) {
  const auto& xs = g.abscissae;
  if (x < xs.front() || x > xs.back()) {
    std::ostringstream msg;
    msg << "grid function evaluated at " << x << " outside sampled range [" << xs.front() << ", "
        << xs.back() << "]";
    throw DomainError(msg.str());
  }
  const bool hermite = !g.derivatives.empty();
  if (!hermite && order >= 1) {
    throw DomainError("grid function lacks derivative data (order " + std::to_string(order) +
                      " requested)");
  }
  if (order > 3) return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
  if (i >= xs.size() - 1) i = xs.size() - 2;
  const double h = xs[i + 1] - xs[i];
  const double t = (x - xs[i]) / h;
  const double y0 = g.values[i];
  const double y1 = g.values[i + 1];
  if (!hermite) return y0 + t * (y1 - y0);

  const double m0 = g.derivatives[i] * h;
  const double m1 = g.derivatives[i + 1] * h;
  // Cubic in t: p(t) = c0 + c1 t + c2 t^2 + c3 t^3.
  const double c0 = y0;
  const double c1 = m0;
  const double c2 = -3.0 * y0 - 2.0 * m0 + 3.0 * y1 - m1;
  const double c3 = 2.0 * y0 + m0 - 2.0 * y1 + m1;
  switch (order) {
    case 0:
      return ((c3 * t + c2) * t + c1) * t + c0;
    case 1:
      return ((3.0 * c3 * t + 2.0 * c2) * t + c1) / h;
    case 2:
      return (6.0 * c3 * t + 2.0 * c2) / (h * h);
    default:
      return 6.0 * c3 / (h * h * h);
  }
}

}  // namespace

ScalarFunction ScalarFunction::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  for (double c : coefficients) {
    if (!std::isfinite(c)) throw PreconditionError("polynomial coefficient is not finite");
  }
  return ScalarFunction(Polynomial{std::move(coefficients)});
}

ScalarFunction ScalarFunction::monomial(int degree) {
  if (degree < 0) throw PreconditionError("monomial degree must be non-negative");
  std::vector<double> c(static_cast<std::size_t>(degree) + 1, 0.0);
  c.back() = 1.0;
  return polynomial(std::move(c));
}

ScalarFunction ScalarFunction::gaussian(double center, double width) {
  if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(center)) {
    throw PreconditionError("Gaussian packet needs finite center and width > 0");
  }
  return ScalarFunction(GaussianPacket{center, width});
}

ScalarFunction ScalarFunction::grid(std::vector<double> abscissae, std::vector<double> values,
                                    std::vector<double> derivatives) {
  if (abscissae.size() < 2 || abscissae.size() != values.size()) {
    throw PreconditionError("grid function needs at least two (abscissa, value) samples");
  }
  if (!derivatives.empty() && derivatives.size() != values.size()) {
    throw PreconditionError("grid derivative samples must match value samples");
  }
  for (std::size_t i = 1; i < abscissae.size(); ++i) {
    if (!(abscissae[i] > abscissae[i - 1])) {
      throw PreconditionError("grid abscissae must be strictly increasing");
    }
  }
  return ScalarFunction(GridFunction{std::move(abscissae), std::move(values), std::move(derivatives)});
}

double ScalarFunction::derivative(double x, int order) const {
  if (order < 0) throw PreconditionError("derivative order must be non-negative");
  return std::visit(
      [&](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          return eval_polynomial(f.coefficients, x, order);
        } else if constexpr (std::is_same_v<T, GaussianPacket>) {
          return eval_gaussian(f, x, order);
        } else {
          return eval_grid(f, x, order);
        }
      },
      repr_);
}

int ScalarFunction::max_derivative_order() const {
  if (const auto* g = std::get_if<GridFunction>(&repr_)) return g->derivatives.empty() ? 0 : 3;
  return -1;
}

int ScalarFunction::degree() const {
  return static_cast<int>(as_polynomial().coefficients.size()) - 1;
}

void ScalarFunction::require_domain(double lo, double hi) const {
  if (const auto* g = std::get_if<GridFunction>(&repr_)) {
    if (lo < g->abscissae.front() || hi > g->abscissae.back()) {
      std::ostringstream msg;
      msg << "spectrum [" << lo << ", " << hi << "] extends outside sampled range ["
          << g->abscissae.front() << ", " << g->abscissae.back() << "]";
      throw DomainError(msg.str());
    }
  }
}

std::string ScalarFunction::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Polynomial>) {
          out << "poly:";
          for (std::size_t k = 0; k < f.coefficients.size(); ++k) {
            if (k) out << ',';
            out << f.coefficients[k];
          }
        } else if constexpr (std::is_same_v<T, GaussianPacket>) {
          out << "gauss:" << f.center << ',' << f.width;
        } else {
          out << "grid:" << f.abscissae.size() << " samples";
        }
      },
      repr_);
  return out.str();
}

}  // namespace ssf3
