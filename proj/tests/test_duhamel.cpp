#include <gtest/gtest.h>

#include <cmath>

#include "ssf3/duhamel.hpp"
#include "ssf3/frechet.hpp"
#include "support.hpp"

using namespace ssf3;
using ssf3::testing::max_abs;

namespace {

double rel(const Matrix& got, const Matrix& want) {
  return max_abs(got - want) / std::max(1.0, max_abs(want));
}

}  // namespace

TEST(UnitaryEvolution, TimeZeroIsIdentity) {
  std::mt19937_64 rng(1);
  const auto d = spectral::eig(ssf3::testing::random_op(rng, 4));
  EXPECT_LE(max_abs(duhamel::unitary_evolution(d, 0.0) - Matrix::Identity(4, 4)), 1e-14);
}

TEST(UnitaryEvolution, PiPhase) {
  const auto d = spectral::eig(HermitianOperator(Matrix::Constant(1, 1, M_PI)));
  const Matrix u = duhamel::unitary_evolution(d, 1.0);
  EXPECT_NEAR(std::abs(u(0, 0) - Complex(-1.0, 0.0)), 0.0, 1e-15);
}

TEST(UnitaryEvolution, UnitarityAndGroupLaw) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = spectral::eig(ssf3::testing::random_op(rng, 6));
    const double t = u(rng), s = u(rng);
    const Matrix et = duhamel::unitary_evolution(d, t);
    const Matrix es = duhamel::unitary_evolution(d, s);
    EXPECT_LE((et * et.adjoint() - Matrix::Identity(6, 6)).norm(), 1e-10);
    EXPECT_LE((et * es - duhamel::unitary_evolution(d, t + s)).norm(), 1e-9);
  }
}

TEST(UnitaryEvolution, InterpolationInequality) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianOperator a = ssf3::testing::random_op(rng, 4);
    const HermitianOperator x = ssf3::testing::random_op(rng, 4, 0.2);
    const HermitianOperator ax(a.matrix() + x.matrix());
    const double beta = u(rng);
    const double diff = spectral::operator_norm(
        duhamel::unitary_evolution(spectral::eig(ax), beta) -
        duhamel::unitary_evolution(spectral::eig(a), beta));
    const double bx = beta * spectral::operator_norm(x.matrix());
    for (double eps : {0.0, 0.5, 1.0}) {
      EXPECT_LE(diff, std::pow(2.0, 1.0 - eps) * std::pow(bx, eps) * (1 + 1e-12) + 1e-14);
    }
  }
}

TEST(FourierFunctionTest, GaussianTransformReproducesFunction) {
  const auto f = FourierFunction::gaussian(0.3, 0.7);
  EXPECT_NEAR(f.truncation, 12.0 / 0.7, 1e-14);
  const auto rule = quad::mapped(quad::gauss_legendre(128), -f.truncation, f.truncation);
  for (double lam : {-1.0, 0.0, 0.3, 1.2}) {
    Complex acc = 0.0;
    for (int i = 0; i < rule.order(); ++i) {
      const double t = rule.nodes[static_cast<std::size_t>(i)];
      acc += rule.weights[static_cast<std::size_t>(i)] * f.hat(t) * std::exp(Complex(0.0, t * lam));
    }
    EXPECT_NEAR(acc.real(), f.phi.value(lam), 1e-12);
    EXPECT_NEAR(acc.imag(), 0.0, 1e-12);
  }
  const auto m = f.weighted_mass();
  EXPECT_LE(m.tail, FourierFunction::kTailTolerance * (m.inside + m.tail));
}

TEST(FourierFunctionTest, TailViolationAndNonGaussianRejected) {
  auto f = FourierFunction::gaussian(0.0, 1.0);
  f.truncation = 2.0;
  EXPECT_THROW(f.validate(), DomainError);
  EXPECT_THROW(FourierFunction::from_scalar(ScalarFunction::monomial(3)), PreconditionError);
}

TEST(D1Fourier, ZeroDirection) {
  std::mt19937_64 rng(4);
  const HermitianOperator a = ssf3::testing::random_op(rng, 3);
  EXPECT_LE(max_abs(duhamel::d1_fourier(FourierFunction::gaussian(0, 1), a, Matrix::Zero(3, 3))), 0.0);
}

TEST(D1Fourier, ScalarMatrixCollapse) {
  std::mt19937_64 rng(5);
  const double c = 0.4;
  const auto f = FourierFunction::gaussian(0.1, 0.9);
  const Matrix x = ssf3::testing::random_op(rng, 3).matrix();
  const Matrix got = duhamel::d1_fourier(f, HermitianOperator(c * Matrix::Identity(3, 3)), x);
  EXPECT_LE(rel(got, f.phi.derivative(c, 1) * x), 1e-6);
}

TEST(D1Fourier, AgreesWithDivDiffOnRandomInputs) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianOperator a = ssf3::testing::random_op(rng, 4);
    const Matrix x = ssf3::testing::random_op(rng, 4).matrix();
    const auto f = FourierFunction::gaussian(0.2, 1.1);
    const Matrix want = frechet::d1_divdiff(f.phi, spectral::eig(a), x);
    EXPECT_LE(rel(duhamel::d1_fourier(f, a, x), want), 1e-6);
  }
}

TEST(D2Fourier, ZeroDirections) {
  std::mt19937_64 rng(7);
  const HermitianOperator a = ssf3::testing::random_op(rng, 3);
  const Matrix z = Matrix::Zero(3, 3);
  EXPECT_LE(max_abs(duhamel::d2_fourier(FourierFunction::gaussian(0, 1), a, z, z)), 0.0);
}

TEST(D2Fourier, ScalarMatrixCollapse) {
  std::mt19937_64 rng(8);
  const double c = -0.3;
  const auto f = FourierFunction::gaussian(0.1, 0.9);
  const Matrix x = ssf3::testing::random_op(rng, 3).matrix();
  const Matrix y = ssf3::testing::random_op(rng, 3).matrix();
  const HermitianOperator a(c * Matrix::Identity(3, 3));
  const Matrix got = duhamel::d2_fourier(f, a, x, y);
  // Mixed-partial normalisation: the same collapse every derivative route uses.
  EXPECT_LE(rel(got, 0.5 * f.phi.derivative(c, 2) * (x * y + y * x)), 1e-5);
  EXPECT_LE(rel(got, frechet::d2_divdiff(f.phi, spectral::eig(a), x, y)), 1e-5);
}

TEST(D2Fourier, AgreesWithDivDiffOnRandomInputs) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const HermitianOperator a = ssf3::testing::random_op(rng, 3);
    const Matrix x = ssf3::testing::random_op(rng, 3).matrix();
    const Matrix y = ssf3::testing::random_op(rng, 3).matrix();
    const auto f = FourierFunction::gaussian(-0.1, 1.0);
    const Matrix want = frechet::d2_divdiff(f.phi, spectral::eig(a), x, y);
    EXPECT_LE(rel(duhamel::d2_fourier(f, a, x, y), want), 1e-5);
  }
}

TEST(RemainderFourier, ZeroPerturbation) {
  std::mt19937_64 rng(10);
  const HermitianOperator a = ssf3::testing::random_op(rng, 3);
  const auto r = duhamel::remainder_fourier(FourierFunction::gaussian(0, 1), a, HermitianOperator::zero(3));
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(r.converged);
}

TEST(RemainderFourier, CommutingPairMatchesScalarTaylor) {
  RealVector av(3), vv(3);
  av << -0.4, 0.1, 0.8;
  vv << 0.3, -0.5, 0.2;
  const auto f = FourierFunction::gaussian(0.2, 0.8);
  double want = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double x = av(i), v = vv(i);
    want += f.phi.value(x + v) - f.phi.value(x) - f.phi.derivative(x, 1) * v -
            0.5 * f.phi.derivative(x, 2) * v * v;
  }
  const auto r = duhamel::remainder_fourier(f, HermitianOperator::diagonal(av), HermitianOperator::diagonal(vv));
  EXPECT_LE(std::abs(r.value - want), 1e-5 * (1.0 + std::abs(want)));
}

TEST(RemainderFourier, AgreesWithRemainderTrace) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::Index n = 2 + trial % 3;
    const HermitianOperator a = ssf3::testing::random_op(rng, n);
    const HermitianOperator v = ssf3::testing::scaled_op(rng, n, 1.0);
    const auto f = FourierFunction::gaussian(0.0, 1.0);
    const double want = frechet::remainder_trace(f.phi, a, v, 3);
    const auto r = duhamel::remainder_fourier(f, a, v);
    EXPECT_LE(std::abs(r.value - want), 1e-5 * (1.0 + std::abs(want)));
    EXPECT_LE(r.imag_residue, 1e-8 * (1.0 + std::abs(r.value)));
    EXPECT_TRUE(r.converged);
  }
}

TEST(WeightedL1Norm, ZeroDensity) {
  EtaDensity eta;
  eta.grid = {0.0, 1.0};
  eta.values = {0.0, 0.0};
  eta.support = {0.0, 1.0};
  EXPECT_EQ(duhamel::weighted_l1_norm(eta, 1.0), 0.0);
}

TEST(WeightedL1Norm, ScalarCaseAgainstGaussLegendre) {
  EtaOptions o;
  o.grid_size = 2001;
  o.check_convergence = false;
  const auto eta = ssf::eta_density(HermitianOperator::zero(1), HermitianOperator(Matrix::Ones(1, 1)), o);
  const auto rule = quad::gauss_legendre(64);
  double want = 0.0;
  for (int i = 0; i < rule.order(); ++i) {
    const double x = rule.nodes[static_cast<std::size_t>(i)];
    want += rule.weights[static_cast<std::size_t>(i)] * 0.5 * (1 - x) * (1 - x) / std::pow(1 + x * x, 2);
  }
  EXPECT_NEAR(duhamel::weighted_l1_norm(eta, 1.0), want, 1e-6);
}

TEST(WeightedL1Norm, BoundOnRandomCorpus) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    const HermitianOperator a = ssf3::testing::random_op(rng, n);
    const HermitianOperator v = ssf3::testing::scaled_op(rng, n, 0.8);
    EtaOptions o;
    o.grid_size = 201;
    o.check_convergence = false;
    const auto eta = ssf::eta_density(a, v, o);
    for (double eps : {0.25, 1.0}) {
      EXPECT_LE(duhamel::weighted_l1_norm(eta, eps), duhamel::psi_l1_norm(eps) * 0.64 * (1 + 1e-9));
    }
  }
}

TEST(PsiL1Norm, ClosedForms) {
  EXPECT_NEAR(duhamel::psi_l1_norm(1.0), M_PI / 2.0, 1e-14);
  EXPECT_NEAR(duhamel::psi_l1_norm(0.5), 2.0, 1e-14);
  EXPECT_THROW(duhamel::psi_l1_norm(0.0), PreconditionError);
}
