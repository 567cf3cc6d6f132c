#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ssf3/types.hpp"

namespace ssf3 {

struct Polynomial {
  // coefficients[k] multiplies x^k.
  std::vector<double> coefficients;
};

// exp(-(x - center)^2 / (2 width^2))
struct GaussianPacket {
  double center = 0.0;
  double width = 1.0;
};

// Tabulated function. With derivative samples the interpolant is piecewise
// cubic Hermite (so first and second derivatives are available); without
// them it is piecewise linear and only values can be requested.
struct GridFunction {
  std::vector<double> abscissae;
  std::vector<double> values;
  std::vector<double> derivatives;  // empty, or same length as values
};

class ScalarFunction {
 public:
  using Variant = std::variant<Polynomial, GaussianPacket, GridFunction>;

  static ScalarFunction polynomial(std::vector<double> coefficients);
  static ScalarFunction monomial(int degree);
  static ScalarFunction gaussian(double center, double width);
  static ScalarFunction grid(std::vector<double> abscissae, std::vector<double> values,
                             std::vector<double> derivatives = {});

  double value(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;

  // Highest derivative order available everywhere (-1 for unlimited).
  int max_derivative_order() const;

  bool is_polynomial() const { return std::holds_alternative<Polynomial>(repr_); }
  bool is_gaussian() const { return std::holds_alternative<GaussianPacket>(repr_); }
  bool is_grid() const { return std::holds_alternative<GridFunction>(repr_); }

  const Variant& variant() const { return repr_; }
  const Polynomial& as_polynomial() const { return std::get<Polynomial>(repr_); }
  const GaussianPacket& as_gaussian() const { return std::get<GaussianPacket>(repr_); }
  const GridFunction& as_grid() const { return std::get<GridFunction>(repr_); }

  // Polynomial degree (coefficient count - 1); throws for other variants.
  int degree() const;

  // Throws DomainError unless [lo, hi] lies inside the sampled range.
  void require_domain(double lo, double hi) const;

  std::string describe() const;

 private:
  explicit ScalarFunction(Variant v) : repr_(std::move(v)) {}
  Variant repr_;
};

}  // namespace ssf3
