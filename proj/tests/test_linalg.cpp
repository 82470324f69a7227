#include <cmath>

#include <gtest/gtest.h>

#include "mqht/linalg.hpp"
#include "test_support.hpp"

namespace mqht {
namespace {

using testing::diag;
using testing::identity;
using testing::kind_of;
using testing::max_diff;
using testing::random_hermitian;
using testing::random_psd;

// Reference spectrum from Eigen's tridiagonal QR, independent of the Jacobi sweep.
RealVector oracle_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(Eigen::MatrixXcd(h), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double orthogonality_defect(const ComplexMatrix& v) {
  return max_diff(v.adjoint() * v, identity(static_cast<std::size_t>(v.rows())));
}

TEST(Eigh, IdentityHasUnitSpectrum) {
  const HermitianEig eig = eigh(identity(3));
  for (Eigen::Index k = 0; k < 3; ++k) EXPECT_NEAR(eig.values[k], 1.0, 1e-14);
  EXPECT_LE(orthogonality_defect(eig.vectors), 1e-12);
}

TEST(Eigh, DiagonalIsSortedAscending) {
  const HermitianEig eig = eigh(diag({1.0, -1.0}));
  EXPECT_NEAR(eig.values[0], -1.0, 1e-14);
  EXPECT_NEAR(eig.values[1], 1.0, 1e-14);
}

TEST(Eigh, RandomHermitianReconstructs) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const ComplexMatrix h = random_hermitian(8, seed);
    const HermitianEig eig = eigh(h);
    const double residual = (eig.reconstruct() - h).norm() / (1.0 + h.norm());
    EXPECT_LT(residual, 1e-9) << "seed " << seed;
    EXPECT_LE(orthogonality_defect(eig.vectors), 1e-10) << "seed " << seed;
    const RealVector ref = oracle_eigenvalues(h);
    EXPECT_LE((eig.values - ref).cwiseAbs().maxCoeff(), 1e-10) << "seed " << seed;
    for (Eigen::Index k = 1; k < 8; ++k) EXPECT_LE(eig.values[k - 1], eig.values[k]);
  }
}

TEST(Eigh, JacobiAndTridiagonalAgree) {
  for (std::size_t d : {1u, 2u, 5u, 16u, 64u}) {
    const ComplexMatrix h = random_hermitian(d, 1000 + d);
    const HermitianEig a = jacobi_eigh(h);
    const HermitianEig b = tridiagonal_eigh(h);
    EXPECT_LE((a.values - b.values).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + max_abs(h))) << "d " << d;
    EXPECT_LE(max_diff(a.reconstruct(), h), 1e-9 * (1.0 + max_abs(h)));
  }
}

TEST(Eigh, LargeDimensionUsesDirectSolver) {
  const ComplexMatrix h = random_hermitian(100, 77);
  const HermitianEig eig = eigh(h);
  EXPECT_LT((eig.reconstruct() - h).norm() / (1.0 + h.norm()), 1e-9);
  EXPECT_LE(orthogonality_defect(eig.vectors), 1e-10);
}

TEST(Eigh, DegenerateSpectrum) {
  // Projector of rank 2 in d = 5 with a random basis.
  const ComplexMatrix p = support_projection(random_psd(5, 2, 9));
  const HermitianEig eig = eigh(p);
  EXPECT_NEAR(eig.values[0], 0.0, 1e-12);
  EXPECT_NEAR(eig.values[2], 0.0, 1e-12);
  EXPECT_NEAR(eig.values[3], 1.0, 1e-12);
  EXPECT_NEAR(eig.values[4], 1.0, 1e-12);
  EXPECT_LE(orthogonality_defect(eig.vectors), 1e-10);
}

TEST(Eigh, RejectsNonHermitianAndNonSquare) {
  ComplexMatrix a = diag({1.0, 2.0});
  a(0, 1) = 1.0;
  EXPECT_EQ(kind_of([&] { eigh(a); }), ErrorKind::HermiticityViolation);
  ComplexMatrix rect = ComplexMatrix::Zero(2, 3);
  EXPECT_EQ(kind_of([&] { eigh(rect); }), ErrorKind::HermiticityViolation);
}

TEST(Eigh, ToleratesTinyAsymmetry) {
  ComplexMatrix a = diag({1.0, 2.0});
  a(0, 1) = 1e-12;
  EXPECT_NO_THROW(eigh(a));
}

TEST(MatrixPower, Examples) {
  EXPECT_LE(max_diff(matrix_power(identity(3), 0.5), identity(3)), 1e-14);
  EXPECT_LE(max_diff(matrix_power(diag({4.0, 0.0}), 0.5), diag({2.0, 0.0})), 1e-14);
  // s = 0 gives the support projection.
  EXPECT_LE(max_diff(matrix_power(diag({0.3, 0.0, 0.7}), 0.0), diag({1.0, 0.0, 1.0})), 1e-14);
}

TEST(MatrixPower, RankOneProjectorIsIdempotent) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ComplexMatrix v = random_psd(2, 1, seed);
    const ComplexMatrix p = v / v.trace().real();
    // Oracle: P is a projector exactly when its spectrum is {0, 1}.
    const RealVector spectrum = oracle_eigenvalues(p);
    ASSERT_NEAR(spectrum[0], 0.0, 1e-12);
    ASSERT_NEAR(spectrum[1], 1.0, 1e-12);
    for (double s : {0.1, 0.37, 0.5, 0.9}) EXPECT_LE(max_diff(matrix_power(p, s), p), 1e-12) << "s " << s;
  }
}

TEST(MatrixPower, SemigroupOnSupport) {
  SplitMix64 rng(5);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ComplexMatrix a = random_psd(4, 1 + seed % 4, seed);
    EXPECT_LE(max_diff(matrix_power(a, 1.0), a), 1e-10 * (1.0 + max_abs(a)));
    const double s = rng.uniform_open_closed();
    const double t = rng.uniform_open_closed();
    const ComplexMatrix lhs = matrix_power(a, s) * matrix_power(a, t);
    EXPECT_LE(max_diff(lhs, matrix_power(a, s + t)), 1e-8) << "seed " << seed;
  }
}

TEST(MatrixPower, RejectsNegativeInput) {
  EXPECT_EQ(kind_of([] { matrix_power(diag({1.0, -0.1}), 0.5); }), ErrorKind::PSDViolation);
  EXPECT_NO_THROW(matrix_power(diag({1.0, -1e-12}), 0.5));
}

TEST(PositivePart, Examples) {
  EXPECT_LE(max_diff(positive_part(diag({3.0, -2.0})), diag({3.0, 0.0})), 1e-14);
  EXPECT_LE(max_abs(positive_part(ComplexMatrix::Zero(3, 3))), 0.0);
}

TEST(PositivePart, TraceIdentityAndDecomposition) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ComplexMatrix h = random_hermitian(5, seed);
    const RealVector ev = oracle_eigenvalues(h);
    const double expected = (ev.cwiseAbs().sum() + ev.sum()) / 2.0;
    const ComplexMatrix plus = positive_part(h);
    EXPECT_NEAR(plus.trace().real(), expected, 1e-10);
    EXPECT_LE(max_diff(plus - positive_part(-h), h), 1e-10) << "seed " << seed;
    EXPECT_GE(min_eigenvalue(plus), -1e-12);
  }
}

TEST(SupportProjection, Examples) {
  EXPECT_LE(max_diff(support_projection(diag({0.7, 0.0, 0.3})), diag({1.0, 0.0, 1.0})), 1e-14);
  EXPECT_LE(max_abs(support_projection(ComplexMatrix::Zero(2, 2))), 0.0);
}

TEST(SupportProjection, RankTwoInFour) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ComplexMatrix a = random_psd(4, 2, seed);
    const RealVector ev = oracle_eigenvalues(a);
    const double floor = 1e-12 * ev.cwiseAbs().maxCoeff();
    const long expected_rank = (ev.array() > floor).count();
    ASSERT_EQ(expected_rank, 2);
    const ComplexMatrix p = support_projection(a);
    EXPECT_NEAR(p.trace().real(), 2.0, 1e-10);
    EXPECT_LE(max_diff(p * p, p), 1e-9);
    EXPECT_LE(max_diff(p.adjoint(), p), 1e-12);
    EXPECT_LE(max_diff(p * a, a), 1e-9 * (1.0 + max_abs(a)));
  }
}

TEST(SqrtPsd, Examples) {
  EXPECT_LE(max_diff(sqrt_psd(identity(4)), identity(4)), 1e-14);
  EXPECT_LE(max_diff(sqrt_psd(diag({9.0, 4.0})), diag({3.0, 2.0})), 1e-14);
}

TEST(SqrtPsd, SquareReproducesInput) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ComplexMatrix a = random_psd(6, 1 + seed % 6, seed);
    const ComplexMatrix b = sqrt_psd(a);
    EXPECT_LE(max_diff(b * b, a), 1e-9 * (1.0 + max_abs(a))) << "seed " << seed;
    EXPECT_GE(min_eigenvalue(b), -1e-10);
  }
  EXPECT_EQ(kind_of([] { sqrt_psd(diag({-1.0, 1.0})); }), ErrorKind::PSDViolation);
}

TEST(PinvSqrt, InvertsOnSupport) {
  const ComplexMatrix a = random_psd(4, 3, 11);
  const ComplexMatrix b = pinv_sqrt_psd(a);
  const ComplexMatrix s = sqrt_psd(a);
  EXPECT_LE(max_diff(b * s, support_projection(a)), 1e-8);
}

TEST(Kron, Examples) {
  EXPECT_LE(max_diff(kron(identity(2), identity(2)), identity(4)), 0.0);
  EXPECT_LE(max_diff(kron(diag({2.0, 3.0}), diag({5.0, 7.0})), diag({10.0, 14.0, 15.0, 21.0})), 0.0);
  const ComplexMatrix rect = ComplexMatrix::Ones(2, 3);
  const ComplexMatrix k = kron(rect, identity(2));
  EXPECT_EQ(k.rows(), 4);
  EXPECT_EQ(k.cols(), 6);
}

TEST(Kron, TraceMultiplicativeAndAssociative) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ComplexMatrix a = random_hermitian(2, seed);
    const ComplexMatrix b = random_hermitian(3, seed + 100);
    const ComplexMatrix c = random_hermitian(2, seed + 200);
    EXPECT_NEAR(std::abs(kron(a, b).trace() - a.trace() * b.trace()), 0.0, 1e-12);
    EXPECT_LE(max_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-12);
  }
}

TEST(TraceNorm, Examples) {
  EXPECT_NEAR(trace_norm(diag({1.0, -1.0})), 2.0, 1e-14);
  EXPECT_EQ(trace_norm(ComplexMatrix::Zero(3, 3)), 0.0);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ComplexMatrix h = random_hermitian(6, seed);
    EXPECT_NEAR(trace_norm(h), oracle_eigenvalues(h).cwiseAbs().sum(), 1e-10);
  }
  ComplexMatrix bad = diag({1.0, 1.0});
  bad(1, 0) = Complex(0.0, 1.0);
  EXPECT_EQ(kind_of([&] { trace_norm(bad); }), ErrorKind::HermiticityViolation);
}

TEST(Traces, ProductMatchesDenseProduct) {
  const ComplexMatrix a = random_hermitian(5, 1);
  const ComplexMatrix b = random_psd(5, 5, 2);
  EXPECT_NEAR(std::abs(trace_of_product(a, b) - (a * b).trace()), 0.0, 1e-12);
  EXPECT_NEAR(real_trace_of_product(a, b), (a * b).trace().real(), 1e-12);
  ComplexMatrix skew = ComplexMatrix::Zero(1, 1);
  skew(0, 0) = Complex(0.0, 1.0);
  EXPECT_EQ(kind_of([&] { real_trace(skew); }), ErrorKind::ConsistencyViolation);
}

}  // namespace
}  // namespace mqht
