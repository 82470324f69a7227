#include "mqht/evaluation.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mqht/error.hpp"

namespace mqht {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Error sums at or below this are floating-point noise on an exact zero.
constexpr double kZeroError = 1e-13;

double single_point_rate(double err_sm, int n) {
  if (err_sm <= kZeroError) return kInf;
  return -std::log(err_sm) / n;
}

}  // namespace

ErrorReport error_sum(std::span<const DensityMatrix> states, const Detector& detector, int n) {
  if (states.size() != detector.size()) {
    throw Error(ErrorKind::DimensionMismatch, "error_sum: " + std::to_string(states.size()) + " states but " +
                                                  std::to_string(detector.size()) + " detector elements");
  }
  ErrorReport out;
  out.n = n;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != detector.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "error_sum: detector dimension " + std::to_string(detector.dim()) +
                                                    " does not match state dimension " + std::to_string(states[i].dim()));
    }
    // tr[rho (I - E)] formed directly: 1 - tr[rho E] cancels badly once errors drop below ~1e-7.
    const auto d = static_cast<Eigen::Index>(detector.dim());
    const ComplexMatrix complement = ComplexMatrix::Identity(d, d) - detector.elements[i];
    out.per_state_error.push_back(real_trace_of_product(states[i].matrix(), complement));
    out.succ_sm += real_trace_of_product(states[i].matrix(), detector.elements[i]);
  }
  for (double e : out.per_state_error) out.err_sm += e;
  out.err_avg = out.err_sm / static_cast<double>(states.size());
  return out;
}

ErrorReport error_sum(const Ensemble& ensemble, int n, const Detector& detector, std::size_t dim_cap) {
  const std::vector<DensityMatrix> powered = tensor_powers(ensemble.states(), n, dim_cap);
  return error_sum(powered, detector, n);
}

LemmaCheck lemma_bound_check(const DensityMatrix& rho1, const DensityMatrix& rho2,
                             std::span<const ComplexMatrix> partials, std::span<const DensityMatrix> rest) {
  if (partials.size() != rest.size()) {
    throw Error(ErrorKind::InvalidArgument, "lemma_bound_check: one state per partial element expected");
  }
  const Detector hh = holevo_helstrom(rho1, rho2);
  LemmaCheck out;
  out.composed = compose_with_binary(partials, hh);
  std::vector<DensityMatrix> states{rho1, rho2};
  states.insert(states.end(), rest.begin(), rest.end());
  out.lhs = error_sum(states, out.composed.detector).err_sm;
  out.terms = lemma_terms(rho1, rho2, hh, partials, rest);
  out.composed.trace.terms = out.terms;
  out.rhs = out.terms.bound();
  out.holds = out.lhs <= out.rhs + tol::kBound;
  return out;
}

OverallCheck overall_bound_check(const Ensemble& ensemble, int n, double w1, SubDetectorStrategy sub,
                                 std::size_t dim_cap, const CompositionOptions& options) {
  OverallCheck out;
  out.split = build_split_detector(ensemble, n, w1, sub, dim_cap, options);
  const std::vector<DensityMatrix> powered = tensor_powers(ensemble.states(), n, dim_cap);
  out.errors = error_sum(powered, out.split.detector, n);
  const LemmaTerms& terms = *out.split.trace.terms;
  out.lhs = out.errors.err_sm;
  out.rhs = 2.0 * terms.wedge_trace + 4.0 * (out.split.report.sub_err_1 + out.split.report.sub_err_2);
  out.holds = out.lhs <= out.rhs + tol::kBound;
  out.lemma_rhs = terms.bound();
  out.lemma_holds = out.lhs <= out.lemma_rhs + tol::kBound;
  return out;
}

std::vector<BinaryBoundRow> binary_chernoff_upper_check(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                                        int n_max, std::size_t dim_cap) {
  checked_power_dim(rho1.dim(), n_max, dim_cap);
  const double xi = chernoff_distance(rho1, rho2).xi;
  std::vector<BinaryBoundRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    const std::vector<DensityMatrix> pair{tensor_power(rho1, n, dim_cap), tensor_power(rho2, n, dim_cap)};
    const Detector hh = holevo_helstrom(pair[0], pair[1]);
    BinaryBoundRow row;
    row.n = n;
    row.err_sm = error_sum(pair, hh, n).err_sm;
    row.bound = std::isinf(xi) ? 0.0 : std::exp(-n * xi);
    row.holds = row.err_sm <= row.bound + tol::kBinaryBound;
    rows.push_back(row);
  }
  return rows;
}

ExponentSeries exponent_estimate(std::span<const ErrorPoint> points, int k_fit) {
  if (k_fit < 2) throw Error(ErrorKind::InvalidArgument, "k_fit must be >= 2");
  ExponentSeries out;
  std::vector<ErrorPoint> positive;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (k > 0 && points[k].n <= points[k - 1].n) {
      throw Error(ErrorKind::InvalidArgument, "exponent_estimate: rows must have strictly increasing n");
    }
    const ErrorPoint& p = points[k];
    out.rows.push_back({p.n, p.err_sm, single_point_rate(p.err_sm, p.n)});
    if (p.err_sm <= kZeroError) {
      out.zero_rows.push_back(p.n);
    } else {
      positive.push_back(p);
    }
  }
  if (positive.empty()) {
    out.exact_discrimination = true;
    return out;
  }
  if (positive.size() < 2) {
    throw Error(ErrorKind::Undefined, "exponent_estimate needs at least two rows with err_sm > 0");
  }
  const std::size_t k = std::min(static_cast<std::size_t>(k_fit), positive.size());
  const std::span<const ErrorPoint> tail = std::span<const ErrorPoint>(positive).last(k);
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : tail) {
    mean_x += p.n;
    mean_y += -std::log(p.err_sm);
  }
  mean_x /= static_cast<double>(k);
  mean_y /= static_cast<double>(k);
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& p : tail) {
    const double dx = p.n - mean_x;
    sxy += dx * (-std::log(p.err_sm) - mean_y);
    sxx += dx * dx;
  }
  out.k_fit = static_cast<int>(k);
  out.fitted_slope = sxy / sxx;
  return out;
}

void validate_config(const ExperimentConfig& config, std::size_t dim, std::size_t r) {
  if (config.n_min < 1) throw Error(ErrorKind::InvalidArgument, "n_min must be >= 1");
  if (config.n_max < config.n_min) throw Error(ErrorKind::InvalidArgument, "n_max must be >= n_min");
  if (config.k_fit < 2) throw Error(ErrorKind::InvalidArgument, "k_fit must be >= 2");
  if (!(config.w1 > 0.0 && config.w1 < 1.0)) throw Error(ErrorKind::InvalidArgument, "w1 must lie in (0, 1)");
  for (int n = config.n_min; n <= config.n_max; ++n) {
    try {
      checked_power_dim(dim, n, config.dim_cap);
    } catch (const Error& e) {
      throw Error(ErrorKind::DimensionCapExceeded, "n = " + std::to_string(n) + ": " + e.what());
    }
    if (r >= 3) split_counts(n, config.w1);
  }
}

ExperimentTable run_experiment(const Ensemble& ensemble, const ExperimentConfig& config) {
  const std::size_t r = ensemble.size();
  validate_config(config, ensemble.dim(), r);

  ExperimentTable table;
  table.r = r;
  table.dim = ensemble.dim();
  table.config = config;
  const PairwiseChernoff pairwise(ensemble);
  table.xi = pairwise.matrix();
  table.mqcb = mqcb(pairwise);
  const double xi12 = pairwise.xi(0, 1);
  if (r >= 3) {
    table.xi_bar_12 = xi_bar(pairwise, 0, 1);
    table.condition = theorem_condition(pairwise);
    table.reference_level = std::min(xi12, *table.xi_bar_12 / 6.0);
  } else {
    table.reference_level = xi12;
  }
  if (!(table.mqcb.pair == IndexPair{0, 1})) {
    table.warnings.push_back("least favorable pair is (" + std::to_string(table.mqcb.pair.i + 1) + "," +
                             std::to_string(table.mqcb.pair.j + 1) +
                             "); the detector uses states 1 and 2 as its binary pair");
  }

  std::vector<ErrorPoint> points;
  for (int n = config.n_min; n <= config.n_max; ++n) {
    ExperimentRow row;
    row.n = n;
    row.reference_level = table.reference_level;
    row.binary_bound = std::isinf(xi12) ? 0.0 : std::exp(-n * xi12);
    if (r == 2) {
      const std::vector<DensityMatrix> powered = tensor_powers(ensemble.states(), n, config.dim_cap);
      const Detector hh = holevo_helstrom(powered[0], powered[1]);
      row.n1 = n;
      row.n2 = 0;
      row.errors = error_sum(powered, hh, n);
      // No partial elements: both bounds reduce to 2 tr[rho1^n ^ rho2^n].
      row.lemma_rhs = row.overall_rhs = 2.0 * row.errors.err_sm;
      row.povm = check_povm(hh);
    } else {
      const OverallCheck check =
          overall_bound_check(ensemble, n, config.w1, config.sub, config.dim_cap, CompositionOptions{false});
      row.n1 = check.split.report.n1;
      row.n2 = check.split.report.n2;
      row.errors = check.errors;
      row.overall_rhs = check.rhs;
      row.lemma_rhs = check.lemma_rhs;
      row.povm = check_povm(check.split.detector);
    }
    row.lemma_holds = row.errors.err_sm <= row.lemma_rhs + tol::kBound;
    row.overall_holds = row.errors.err_sm <= row.overall_rhs + tol::kBound;
    row.rate = single_point_rate(row.errors.err_sm, n);
    points.push_back({n, row.errors.err_sm});
    table.rows.push_back(std::move(row));
  }

  std::size_t positive = 0;
  for (const auto& p : points)
    if (p.err_sm > kZeroError) ++positive;
  if (positive == 1) {
    table.warnings.push_back("only one row with nonzero error; no exponent fit");
    for (const auto& p : points) table.series.rows.push_back({p.n, p.err_sm, single_point_rate(p.err_sm, p.n)});
  } else {
    table.series = exponent_estimate(points, config.k_fit);
  }
  if (table.series.fitted_slope && *table.series.fitted_slope > table.mqcb.value + tol::kSlopeDiagnostic) {
    table.warnings.push_back("fitted slope exceeds the multiple Chernoff bound (finite-n effect; the bound "
                             "constrains only the limit)");
  }
  return table;
}

}  // namespace mqht
