#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mqht/linalg.hpp"

namespace mqht {

inline constexpr std::size_t kDefaultDimCap = 4096;

namespace tol {
inline constexpr double kUnitTrace = 1e-10;
inline constexpr double kProbabilitySum = 1e-12;
inline constexpr double kDistinct = 1e-8;  // Frobenius distance between ensemble members
}  // namespace tol

/// Hermitian, positive semidefinite, unit-trace d x d matrix.
class DensityMatrix {
 public:
  /// Validates all three invariants and throws the matching ErrorKind.
  static DensityMatrix from_matrix(ComplexMatrix m);
  /// Skips validation; for constructions that preserve the invariants
  /// (convex mixtures, tensor products).
  static DensityMatrix unchecked(ComplexMatrix m);

  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }

 private:
  explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
  ComplexMatrix matrix_;
};

inline DensityMatrix density_from_matrix(ComplexMatrix m) { return DensityMatrix::from_matrix(std::move(m)); }

DensityMatrix pure_state(std::span<const Complex> v);
DensityMatrix classical_state(std::span<const double> p);
/// G G^dagger / tr(G G^dagger) with G a dim x rank matrix of complex Gaussians
/// drawn from SplitMix64(seed) in row-major order, real part first, each part
/// N(0, 1) from one Box-Muller pair.
DensityMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed);
/// (1 - epsilon) rho + epsilon sigma.
DensityMatrix mix(const DensityMatrix& rho, const DensityMatrix& sigma, double epsilon);
DensityMatrix tensor_power(const DensityMatrix& rho, int n, std::size_t dim_cap = kDefaultDimCap);

/// d^n, or throws DimensionCapExceeded when it exceeds dim_cap.
std::size_t checked_power_dim(std::size_t d, int n, std::size_t dim_cap);

/// r >= 2 pairwise-distinct states of a common dimension, equal priors.
class Ensemble {
 public:
  explicit Ensemble(std::vector<DensityMatrix> states, std::vector<std::string> labels = {});

  std::size_t size() const { return states_.size(); }
  std::size_t dim() const { return states_.front().dim(); }
  const DensityMatrix& operator[](std::size_t i) const { return states_[i]; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<DensityMatrix> states_;
  std::vector<std::string> labels_;
};

std::vector<DensityMatrix> tensor_powers(std::span<const DensityMatrix> states, int n,
                                         std::size_t dim_cap = kDefaultDimCap);

}  // namespace mqht
