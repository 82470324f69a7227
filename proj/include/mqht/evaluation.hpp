#pragma once

// Exact error probabilities of detectors on tensor-power ensembles, the
// inequality checks of the composition argument, and error-exponent fits.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mqht/chernoff.hpp"
#include "mqht/detectors.hpp"

namespace mqht {

namespace tol {
inline constexpr double kBound = 1e-9;        // slack on Lemma / overall inequalities
inline constexpr double kBinaryBound = 1e-12;  // slack on err_sm(n) <= exp(-n xi)
inline constexpr double kSlopeDiagnostic = 1e-6;
}  // namespace tol

struct ErrorReport {
  int n = 1;
  std::vector<double> per_state_error;  // tr[rho_i^n (I - E_i)]
  double err_sm = 0.0;
  double err_avg = 0.0;
  double succ_sm = 0.0;
};

/// Errors of `detector` against already tensor-powered states; `n` is a label.
ErrorReport error_sum(std::span<const DensityMatrix> states, const Detector& detector, int n = 1);
ErrorReport error_sum(const Ensemble& ensemble, int n, const Detector& detector,
                      std::size_t dim_cap = kDefaultDimCap);

struct LemmaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  LemmaTerms terms;
  ComposedDetector composed;
};

/// Err_sm of the composed detector against
/// 2 tr[rho1 ^ rho2] + 2 tr[(rho1 + rho2) E~3] + sum_i tr[rho_i (I - E_i)].
LemmaCheck lemma_bound_check(const DensityMatrix& rho1, const DensityMatrix& rho2,
                             std::span<const ComplexMatrix> partials, std::span<const DensityMatrix> rest);

struct OverallCheck {
  double lhs = 0.0;        // Err_sm(E^(n))
  double rhs = 0.0;        // 2 tr[rho1^n ^ rho2^n] + 4 (Err_sm(E^(n1,1)) + Err_sm(E^(n2,2)))
  bool holds = false;
  double lemma_rhs = 0.0;  // the Lemma bound evaluated at n copies
  bool lemma_holds = false;
  ErrorReport errors;
  SplitDetector split;
};

OverallCheck overall_bound_check(const Ensemble& ensemble, int n, double w1, SubDetectorStrategy sub,
                                 std::size_t dim_cap = kDefaultDimCap, const CompositionOptions& options = {});

struct BinaryBoundRow {
  int n = 0;
  double err_sm = 0.0;  // tr[rho1^n ^ rho2^n]
  double bound = 0.0;   // exp(-n xi12)
  bool holds = false;
};

std::vector<BinaryBoundRow> binary_chernoff_upper_check(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                                        int n_max, std::size_t dim_cap = kDefaultDimCap);

struct ErrorPoint {
  int n = 0;
  double err_sm = 0.0;
};

struct ExponentRow {
  int n = 0;
  double err_sm = 0.0;
  double rate = 0.0;  // -log(err_sm) / n; +infinity when err_sm == 0
};

struct ExponentSeries {
  std::vector<ExponentRow> rows;
  std::optional<double> fitted_slope;  // empty when exact_discrimination
  int k_fit = 0;                       // number of points actually fitted
  bool exact_discrimination = false;   // every err_sm was zero
  std::vector<int> zero_rows;          // n values excluded from the fit
};

/// Least-squares slope of -log(err_sm) against n over the last k_fit rows
/// with err_sm > 0. Rows must be ordered by ascending n.
ExponentSeries exponent_estimate(std::span<const ErrorPoint> points, int k_fit);

struct ExperimentConfig {
  int n_min = 2;
  int n_max = 8;
  double w1 = 0.5;
  SubDetectorStrategy sub = SubDetectorStrategy::Pgm;
  int k_fit = 4;
  std::size_t dim_cap = kDefaultDimCap;
};

struct ExperimentRow {
  int n = 0;
  int n1 = 0;
  int n2 = 0;
  ErrorReport errors;
  double rate = 0.0;
  double binary_bound = 0.0;     // exp(-n xi12)
  double reference_level = 0.0;  // min(xi12, xi_bar12 / 6), or xi12 when r = 2
  double overall_rhs = 0.0;
  double lemma_rhs = 0.0;
  bool lemma_holds = false;
  bool overall_holds = false;
  PovmCheck povm;
};

struct ExperimentTable {
  std::size_t r = 0;
  std::size_t dim = 0;
  ExperimentConfig config;
  Eigen::MatrixXd xi;  // pairwise Chernoff distances
  MqcbResult mqcb;
  std::optional<double> xi_bar_12;
  std::optional<ConditionReport> condition;
  double reference_level = 0.0;
  std::vector<ExperimentRow> rows;
  ExponentSeries series;
  std::vector<std::string> warnings;
};

/// Validates the whole n range against the dimension cap before computing.
void validate_config(const ExperimentConfig& config, std::size_t dim, std::size_t r);

ExperimentTable run_experiment(const Ensemble& ensemble, const ExperimentConfig& config);

}  // namespace mqht
