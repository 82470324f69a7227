#pragma once

// Dense complex kernel: Hermitian eigendecomposition and the spectral matrix
// functions (powers, square roots, positive parts, support projections) used
// by every higher layer.

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace mqht {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHermitian = 1e-10;   // relative to 1 + max|H_ij|
inline constexpr double kPsd = 1e-10;         // absolute eigenvalue slack
inline constexpr double kEigFloorRel = 1e-12; // eigenvalues <= this * max|lambda| count as zero
inline constexpr double kImagResidue = 1e-9;  // allowed imaginary part of a "real" trace
}  // namespace tol

/// Eigenvalues in ascending order; column k of `vectors` belongs to values[k].
struct HermitianEig {
  RealVector values;
  ComplexMatrix vectors;

  std::size_t dim() const { return static_cast<std::size_t>(values.size()); }
  /// 1e-12 times the largest eigenvalue magnitude (0 for the zero matrix).
  double floor() const;
  ComplexMatrix reconstruct() const;
};

/// Largest dimension handled by the Jacobi solver inside eigh(); larger
/// inputs go through Householder tridiagonalization + implicit QR.
inline constexpr Eigen::Index kJacobiMaxDim = 64;

struct JacobiOptions {
  double rel_offdiag_tol = 1e-12;  // stop when off-diagonal Frobenius mass < tol * ||H||_F
  int max_sweeps = 50;
};

HermitianEig eigh(const ComplexMatrix& h);
HermitianEig jacobi_eigh(const ComplexMatrix& h, const JacobiOptions& options = {});
HermitianEig tridiagonal_eigh(const ComplexMatrix& h);
/// Eigenvalues only, ascending.
RealVector eigvalsh(const ComplexMatrix& h);

double max_abs(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a);
/// Throws HermiticityViolation for non-square or non-Hermitian input.
void require_hermitian(const ComplexMatrix& a, const char* what);
/// (A + A^dagger) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& a);

/// Apply a real function to the spectrum: V diag(fn(lambda)) V^dagger.
template <typename Fn>
ComplexMatrix spectral_apply(const HermitianEig& eig, Fn&& fn) {
  const Eigen::Index d = eig.values.size();
  ComplexMatrix scaled = eig.vectors;
  for (Eigen::Index k = 0; k < d; ++k) scaled.col(k) *= fn(eig.values[k]);
  ComplexMatrix out = scaled * eig.vectors.adjoint();
  return hermitian_part(out);
}

/// A^s on the support of A, with A^0 the support projection (0^0 := 0).
ComplexMatrix matrix_power(const ComplexMatrix& a, double s);
ComplexMatrix matrix_power(const HermitianEig& eig, double s);
ComplexMatrix positive_part(const ComplexMatrix& a);
ComplexMatrix support_projection(const ComplexMatrix& a);
ComplexMatrix sqrt_psd(const ComplexMatrix& a);
/// Moore-Penrose inverse square root on the support; zero on the kernel.
ComplexMatrix pinv_sqrt_psd(const ComplexMatrix& a);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
double trace_norm(const ComplexMatrix& a);

/// Throws PSDViolation if an eigenvalue lies below -tol::kPsd.
void require_psd(const HermitianEig& eig, const char* what);
double min_eigenvalue(const ComplexMatrix& hermitian);

/// tr[A B] without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);
/// Real part of tr[A B]; throws ConsistencyViolation if |Im| > tol::kImagResidue.
double real_trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b);
double real_trace(const ComplexMatrix& a);

}  // namespace mqht
