#include "mqht/states.hpp"

#include <cmath>
#include <string>

#include "mqht/error.hpp"
#include "mqht/random.hpp"

namespace mqht {

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  require_hermitian(m, "density_from_matrix");
  ComplexMatrix h = hermitian_part(m);
  const HermitianEig eig = eigh(h);
  require_psd(eig, "density_from_matrix");
  const double trace = h.trace().real();
  if (std::abs(trace - 1.0) > tol::kUnitTrace) {
    throw Error(ErrorKind::TraceViolation, "density_from_matrix: trace " + std::to_string(trace) + " != 1");
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) { return DensityMatrix(std::move(m)); }

DensityMatrix pure_state(std::span<const Complex> v) {
  if (v.empty()) throw Error(ErrorKind::DegenerateInput, "pure_state: empty vector");
  const Eigen::Map<const ComplexVector> vec(v.data(), static_cast<Eigen::Index>(v.size()));
  const double norm_sq = vec.squaredNorm();
  if (norm_sq == 0.0) throw Error(ErrorKind::DegenerateInput, "pure_state: zero vector");
  ComplexMatrix projector = vec * vec.adjoint() / norm_sq;
  return DensityMatrix::unchecked(hermitian_part(projector));
}

DensityMatrix classical_state(std::span<const double> p) {
  if (p.empty()) throw Error(ErrorKind::NormalizationViolation, "classical_state: empty vector");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw Error(ErrorKind::NormalizationViolation, "classical_state: negative entry");
    sum += x;
  }
  if (std::abs(sum - 1.0) > tol::kProbabilitySum) {
    throw Error(ErrorKind::NormalizationViolation, "classical_state: entries sum to " + std::to_string(sum));
  }
  const auto d = static_cast<Eigen::Index>(p.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) m(i, i) = p[static_cast<std::size_t>(i)];
  return DensityMatrix::unchecked(std::move(m));
}

DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
  if (dim == 0 || rank == 0 || rank > dim) {
    throw Error(ErrorKind::InvalidArgument, "random_density: need 1 <= rank <= dim");
  }
  SplitMix64 rng(seed);
  const auto d = static_cast<Eigen::Index>(dim);
  const auto k = static_cast<Eigen::Index>(rank);
  ComplexMatrix g(d, k);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto [re, im] = rng.gaussian_pair();
      g(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix::unchecked(hermitian_part(m));
}

DensityMatrix mix(const DensityMatrix& rho, const DensityMatrix& sigma, double epsilon) {
  if (rho.dim() != sigma.dim()) throw Error(ErrorKind::DimensionMismatch, "mix: states differ in dimension");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorKind::InvalidArgument, "mix: epsilon outside [0, 1]");
  if (epsilon == 0.0) return rho;
  if (epsilon == 1.0) return sigma;
  return DensityMatrix::unchecked((1.0 - epsilon) * rho.matrix() + epsilon * sigma.matrix());
}

std::size_t checked_power_dim(std::size_t d, int n, std::size_t dim_cap) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "copy count must be >= 1");
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) {
    if (total > dim_cap / d) {
      throw Error(ErrorKind::DimensionCapExceeded,
                  std::to_string(d) + "^" + std::to_string(n) + " exceeds dimension cap " + std::to_string(dim_cap));
    }
    total *= d;
  }
  if (total > dim_cap) {
    throw Error(ErrorKind::DimensionCapExceeded,
                std::to_string(d) + "^" + std::to_string(n) + " exceeds dimension cap " + std::to_string(dim_cap));
  }
  return total;
}

DensityMatrix tensor_power(const DensityMatrix& rho, int n, std::size_t dim_cap) {
  checked_power_dim(rho.dim(), n, dim_cap);
  ComplexMatrix out = rho.matrix();
  for (int k = 1; k < n; ++k) out = kron(out, rho.matrix());
  return DensityMatrix::unchecked(std::move(out));
}

std::vector<DensityMatrix> tensor_powers(std::span<const DensityMatrix> states, int n, std::size_t dim_cap) {
  std::vector<DensityMatrix> out;
  out.reserve(states.size());
  for (const auto& s : states) out.push_back(tensor_power(s, n, dim_cap));
  return out;
}

Ensemble::Ensemble(std::vector<DensityMatrix> states, std::vector<std::string> labels)
    : states_(std::move(states)), labels_(std::move(labels)) {
  if (states_.size() < 2) throw Error(ErrorKind::InvalidArgument, "ensemble needs at least 2 states");
  if (!labels_.empty() && labels_.size() != states_.size()) {
    throw Error(ErrorKind::InvalidArgument, "ensemble labels must match the number of states");
  }
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw Error(ErrorKind::DimensionMismatch, "ensemble states must share one dimension");
    }
  }
  for (std::size_t i = 0; i < states_.size(); ++i) {
    for (std::size_t j = i + 1; j < states_.size(); ++j) {
      const double dist = (states_[i].matrix() - states_[j].matrix()).norm();
      if (dist <= tol::kDistinct) {
        throw Error(ErrorKind::DistinctnessViolation, "states " + std::to_string(i + 1) + " and " +
                                                          std::to_string(j + 1) + " coincide (Frobenius distance " +
                                                          std::to_string(dist) + ")");
      }
    }
  }
}

}  // namespace mqht
