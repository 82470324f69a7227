#pragma once

// Quantum Chernoff distance xi(rho1, rho2) = -log inf_{s in [0,1]} tr[rho1^{1-s} rho2^s],
// its ensemble minimum (the multiple Chernoff bound) and the attainability
// condition xi_ij <= xi_bar_ij / 6 for the least favorable pair.

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "mqht/states.hpp"

namespace mqht {

/// f_min at or below this is treated as exactly zero (xi = +infinity).
inline constexpr double kZeroOverlap = 1e-300;

struct ChernoffOptions {
  double s_tolerance = 1e-8;  // golden-section bracket width
  int curve_points = 0;       // > 1 fills ChernoffResult::curve on a uniform grid
};

struct ChernoffResult {
  double xi = 0.0;      // nats; +infinity for orthogonal supports
  double s_star = 0.0;  // minimizing exponent in [0, 1]
  double f_min = 1.0;
  std::vector<std::pair<double, double>> curve;  // (s, f(s)) samples, optional
};

/// s -> tr[rho1^{1-s} rho2^s], evaluated through both spectral decompositions
/// so each call costs O(d^2). rho^0 is the support projection.
class ChernoffCurve {
 public:
  ChernoffCurve(const DensityMatrix& rho1, const DensityMatrix& rho2);

  double operator()(double s) const;

 private:
  std::vector<double> log_a_;   // logs of rho1's support eigenvalues
  std::vector<double> log_b_;   // logs of rho2's support eigenvalues
  Eigen::MatrixXd overlap_;     // |<a_i|b_j>|^2 restricted to both supports
};

double chernoff_curve(const DensityMatrix& rho1, const DensityMatrix& rho2, double s);

/// Golden-section search on a convex function over [0, 1], followed by a
/// comparison against both endpoints. Returns (argmin, min).
std::pair<double, double> minimize_on_unit_interval(const std::function<double(double)>& f, double s_tolerance);

ChernoffResult chernoff_distance(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                 const ChernoffOptions& options = {});

/// Classical Chernoff information of two probability vectors, using the same
/// support convention (0^0 := 0).
double classical_chernoff(std::span<const double> p, std::span<const double> q, double s_tolerance = 1e-8);

/// Zero-based (i, j) with i < j.
struct IndexPair {
  std::size_t i = 0;
  std::size_t j = 1;
  friend bool operator==(const IndexPair&, const IndexPair&) = default;
};

/// Symmetric table of pairwise Chernoff results for an ensemble.
class PairwiseChernoff {
 public:
  explicit PairwiseChernoff(const Ensemble& ensemble, const ChernoffOptions& options = {});
  /// Table from given distances (upper triangle of a symmetric r x r matrix).
  static PairwiseChernoff from_xi(const Eigen::MatrixXd& xi);

  std::size_t size() const { return static_cast<std::size_t>(xi_.rows()); }
  double xi(std::size_t i, std::size_t j) const { return xi_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }
  /// Minimizing s for tr[rho_i^{1-s} rho_j^s] with the arguments in (i, j) order.
  double s_star(std::size_t i, std::size_t j) const;
  const Eigen::MatrixXd& matrix() const { return xi_; }

 private:
  PairwiseChernoff() = default;
  Eigen::MatrixXd xi_;
  Eigen::MatrixXd s_star_;  // entry (i, j), i < j
};

struct MqcbResult {
  double value = 0.0;
  IndexPair pair;
};

/// Minimum pairwise distance; ties go to the lexicographically smallest pair.
MqcbResult mqcb(const PairwiseChernoff& table);
MqcbResult mqcb(const Ensemble& ensemble);

/// Minimum of xi_kl over all pairs other than (i, j). Needs r >= 3.
double xi_bar(const PairwiseChernoff& table, std::size_t i, std::size_t j);
double xi_bar(const Ensemble& ensemble, std::size_t i, std::size_t j);

struct ConditionReport {
  IndexPair pair;
  double xi_ij = 0.0;
  double xi_bar = 0.0;
  double mqcb = 0.0;
  bool holds = false;
  double margin = 0.0;  // xi_bar / 6 - xi_ij
};

bool attainability_condition(double xi_ij, double xi_bar_ij);

/// Evaluates xi_ij <= xi_bar_ij / 6 at the pair attaining the ensemble minimum.
ConditionReport theorem_condition(const PairwiseChernoff& table);
ConditionReport theorem_condition(const Ensemble& ensemble);

}  // namespace mqht
