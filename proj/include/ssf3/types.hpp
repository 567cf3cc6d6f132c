#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ssf3 {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

// Error hierarchy. Every library failure derives from Error so callers (the
// CLI in particular) can map categories onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input violates a numerical precondition (non-Hermitian, non-finite, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NonHermitianError : public PreconditionError {
 public:
  NonHermitianError(double violation, double scale);
  double violation() const noexcept { return violation_; }

 private:
  double violation_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Function evaluated outside its domain, or asked for derivative data it lacks.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InconsistentInputError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssf3
