#include "mqht/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mqht/error.hpp"

namespace mqht {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::HermiticityViolation,
                std::string(what) + ": expected a non-empty square matrix, got " +
                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

HermitianEig sorted(RealVector values, ComplexMatrix vectors) {
  const Eigen::Index d = values.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values[a] < values[b]; });
  HermitianEig out{RealVector(d), ComplexMatrix(d, d)};
  for (Eigen::Index k = 0; k < d; ++k) {
    out.values[k] = values[order[static_cast<std::size_t>(k)]];
    out.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double offdiag_mass(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return sum;
}

}  // namespace

double HermitianEig::floor() const {
  if (values.size() == 0) return 0.0;
  return tol::kEigFloorRel * values.cwiseAbs().maxCoeff();
}

ComplexMatrix HermitianEig::reconstruct() const {
  return vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint();
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol::kHermitian * (1.0 + max_abs(a));
}

void require_hermitian(const ComplexMatrix& a, const char* what) {
  require_square(a, what);
  if (!is_hermitian(a)) {
    throw Error(ErrorKind::HermiticityViolation,
                std::string(what) + ": max|A - A^dagger| = " + std::to_string(max_abs(a - a.adjoint())));
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  return (0.5 * (a + a.adjoint())).eval();
}

// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq with a
// diagonal unitary, then applies the classic real symmetric rotation.
HermitianEig jacobi_eigh(const ComplexMatrix& h, const JacobiOptions& options) {
  require_hermitian(h, "jacobi_eigh");
  const Eigen::Index d = h.rows();
  ComplexMatrix a = hermitian_part(h);
  for (Eigen::Index i = 0; i < d; ++i) a(i, i) = a(i, i).real();
  ComplexMatrix v = ComplexMatrix::Identity(d, d);

  const double target = options.rel_offdiag_tol * a.norm();
  const double target_sq = target * target;

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    if (offdiag_mass(a) <= target_sq) break;
    for (Eigen::Index p = 0; p < d - 1; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const Complex phase = a(p, q) / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex s_col = s * std::conj(phase);  // multiplies column q
        const Complex s_row = s * phase;             // multiplies row q

        for (Eigen::Index k = 0; k < d; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s_col * akq;
          a(k, q) = s * akp + c * std::conj(phase) * akq;
        }
        for (Eigen::Index k = 0; k < d; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s_row * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < d; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s_col * vkq;
          v(k, q) = s * vkp + c * std::conj(phase) * vkq;
        }
      }
    }
  }
  RealVector values(d);
  for (Eigen::Index i = 0; i < d; ++i) values[i] = a(i, i).real();
  return sorted(std::move(values), std::move(v));
}

HermitianEig tridiagonal_eigh(const ComplexMatrix& h) {
  require_hermitian(h, "tridiagonal_eigh");
  const ComplexMatrix sym = hermitian_part(h);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConsistencyViolation, "tridiagonal_eigh: QR iteration did not converge");
  }
  return HermitianEig{solver.eigenvalues(), solver.eigenvectors()};
}

HermitianEig eigh(const ComplexMatrix& h) {
  require_square(h, "eigh");
  if (h.rows() <= kJacobiMaxDim) return jacobi_eigh(h);
  return tridiagonal_eigh(h);
}

void require_psd(const HermitianEig& eig, const char* what) {
  if (eig.values.size() > 0 && eig.values[0] < -tol::kPsd) {
    throw Error(ErrorKind::PSDViolation,
                std::string(what) + ": eigenvalue " + std::to_string(eig.values[0]) + " below -1e-10");
  }
}

RealVector eigvalsh(const ComplexMatrix& h) {
  require_hermitian(h, "eigvalsh");
  if (h.rows() <= kJacobiMaxDim) return jacobi_eigh(h).values;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConsistencyViolation, "eigvalsh: QR iteration did not converge");
  }
  return solver.eigenvalues();
}

double min_eigenvalue(const ComplexMatrix& hermitian) { return eigvalsh(hermitian)[0]; }

ComplexMatrix matrix_power(const HermitianEig& eig, double s) {
  require_psd(eig, "matrix_power");
  if (!(s >= 0.0)) throw Error(ErrorKind::InvalidArgument, "matrix_power: exponent must be >= 0");
  const double floor = eig.floor();
  return spectral_apply(eig, [&](double lambda) { return lambda > floor ? std::pow(lambda, s) : 0.0; });
}

ComplexMatrix matrix_power(const ComplexMatrix& a, double s) {
  return matrix_power(eigh(a), s);
}

ComplexMatrix positive_part(const ComplexMatrix& a) {
  return spectral_apply(eigh(a), [](double lambda) { return std::max(lambda, 0.0); });
}

ComplexMatrix support_projection(const ComplexMatrix& a) {
  return matrix_power(eigh(a), 0.0);
}

ComplexMatrix sqrt_psd(const ComplexMatrix& a) {
  const HermitianEig eig = eigh(a);
  require_psd(eig, "sqrt_psd");
  return spectral_apply(eig, [](double lambda) { return lambda > 0.0 ? std::sqrt(lambda) : 0.0; });
}

ComplexMatrix pinv_sqrt_psd(const ComplexMatrix& a) {
  const HermitianEig eig = eigh(a);
  require_psd(eig, "pinv_sqrt_psd");
  const double floor = eig.floor();
  return spectral_apply(eig, [&](double lambda) { return lambda > floor ? 1.0 / std::sqrt(lambda) : 0.0; });
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double trace_norm(const ComplexMatrix& a) { return eigvalsh(a).cwiseAbs().sum(); }

Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "trace_of_product: incompatible shapes");
  }
  return (a.array() * b.transpose().array()).sum();
}

double real_trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Complex t = trace_of_product(a, b);
  if (std::abs(t.imag()) > tol::kImagResidue) {
    throw Error(ErrorKind::ConsistencyViolation,
                "trace expected real, imaginary residue " + std::to_string(t.imag()));
  }
  return t.real();
}

double real_trace(const ComplexMatrix& a) {
  const Complex t = a.trace();
  if (std::abs(t.imag()) > tol::kImagResidue) {
    throw Error(ErrorKind::ConsistencyViolation,
                "trace expected real, imaginary residue " + std::to_string(t.imag()));
  }
  return t.real();
}

}  // namespace mqht
