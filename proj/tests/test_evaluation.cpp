#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "mqht/evaluation.hpp"
#include "mqht/scenario.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace mqht {
namespace {

using testing::identity;
using testing::kind_of;

DensityMatrix basis_state(std::size_t d, std::size_t k) {
  std::vector<double> p(d, 0.0);
  p[k] = 1.0;
  return classical_state(p);
}

Ensemble qubit_ensemble(std::size_t r, std::uint64_t seed) {
  std::vector<DensityMatrix> states;
  for (std::size_t k = 0; k < r; ++k) states.push_back(random_density(2, 1 + (seed + k) % 2, 100 * seed + k));
  return Ensemble(states);
}

TEST(ErrorSum, PerfectMeasurement) {
  const Ensemble e({basis_state(3, 0), basis_state(3, 1), basis_state(3, 2)});
  Detector pvm;
  for (std::size_t k = 0; k < 3; ++k) pvm.elements.push_back(basis_state(3, k).matrix());
  const ErrorReport r = error_sum(e, 1, pvm);
  EXPECT_EQ(r.err_sm, 0.0);
  EXPECT_EQ(r.succ_sm, 3.0);
}

TEST(ErrorSum, UninformativeDetector) {
  const Ensemble e = qubit_ensemble(4, 1);
  Detector guess{std::vector<ComplexMatrix>(4, identity(4) / 4.0)};
  const ErrorReport r = error_sum(e, 2, guess);
  for (double x : r.per_state_error) EXPECT_NEAR(x, 0.75, 1e-12);
  EXPECT_NEAR(r.err_sm, 3.0, 1e-12);
  EXPECT_NEAR(r.err_avg, 0.75, 1e-12);
}

TEST(ErrorSum, HelstromMatchesWedge) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Ensemble e = qubit_ensemble(2, seed);
    const Detector hh = holevo_helstrom(e[0], e[1]);
    const ErrorReport r = error_sum(e, 1, hh);
    EXPECT_NEAR(r.err_sm, real_trace(wedge(e[0], e[1], hh)), 1e-10);
    EXPECT_NEAR(r.err_sm + r.succ_sm, 2.0, 1e-9);
    for (double x : r.per_state_error) {
      EXPECT_GE(x, -1e-10);
      EXPECT_LE(x, 1.0 + 1e-10);
    }
  }
}

TEST(ErrorSum, DimensionMismatch) {
  const Ensemble e = qubit_ensemble(2, 1);
  const Detector hh = holevo_helstrom(e[0], e[1]);
  EXPECT_EQ(kind_of([&] { error_sum(e, 2, hh); }), ErrorKind::DimensionMismatch);
  const Detector three{{identity(2) / 3.0, identity(2) / 3.0, identity(2) / 3.0}};
  EXPECT_EQ(kind_of([&] { error_sum(e, 1, three); }), ErrorKind::DimensionMismatch);
}

TEST(LemmaBound, ZeroPartials) {
  const DensityMatrix rho1 = random_density(2, 2, 1);
  const DensityMatrix rho2 = random_density(2, 2, 2);
  const std::vector<DensityMatrix> rest{random_density(2, 2, 3)};
  const std::vector<ComplexMatrix> partials{ComplexMatrix::Zero(2, 2)};
  const LemmaCheck c = lemma_bound_check(rho1, rho2, partials, rest);
  const double w = oracle::helstrom_error(rho1.matrix(), rho2.matrix());
  EXPECT_NEAR(c.lhs, w + 1.0, 1e-12);
  EXPECT_NEAR(c.rhs, 2.0 * w + 1.0, 1e-12);
  EXPECT_TRUE(c.holds);
}

TEST(LemmaBound, OrthogonalTripleWithExactPartial) {
  const std::vector<DensityMatrix> rest{basis_state(3, 2)};
  const std::vector<ComplexMatrix> partials{basis_state(3, 2).matrix()};
  const LemmaCheck c = lemma_bound_check(basis_state(3, 0), basis_state(3, 1), partials, rest);
  EXPECT_NEAR(c.lhs, 0.0, 1e-14);
  EXPECT_NEAR(c.rhs, 0.0, 1e-14);
  EXPECT_TRUE(c.holds);
}

TEST(LemmaBound, HoldsOnRandomConfigurations) {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const std::size_t r = 3 + seed % 2;
    const Ensemble e = qubit_ensemble(r, seed);
    const std::vector<ComplexMatrix> partials = random_feasible_partials(2, r - 2, seed);
    const std::vector<DensityMatrix> rest(e.states().begin() + 2, e.states().end());
    const LemmaCheck c = lemma_bound_check(e[0], e[1], partials, rest);

    // Recompute both sides from scratch.
    const ComplexMatrix e1 = c.composed.detector.elements[0];
    const ComplexMatrix e2 = c.composed.detector.elements[1];
    double lhs = 2.0 - real_trace_of_product(e[0].matrix(), e1) - real_trace_of_product(e[1].matrix(), e2);
    ComplexMatrix e3 = ComplexMatrix::Zero(2, 2);
    double rest_term = 0.0;
    for (std::size_t k = 0; k < partials.size(); ++k) {
      lhs += 1.0 - real_trace_of_product(rest[k].matrix(), partials[k]);
      rest_term += 1.0 - real_trace_of_product(rest[k].matrix(), partials[k]);
      e3 += partials[k];
    }
    const double rhs = 2.0 * oracle::helstrom_error(e[0].matrix(), e[1].matrix()) +
                       2.0 * real_trace_of_product(e[0].matrix() + e[1].matrix(), e3) + rest_term;
    EXPECT_NEAR(c.lhs, lhs, 1e-12);
    EXPECT_NEAR(c.rhs, rhs, 1e-10);
    EXPECT_LE(lhs, rhs + 1e-9) << "seed " << seed;
    EXPECT_TRUE(c.holds);
    EXPECT_GE(c.composed.trace.r_squared_margin, -1e-9);
  }
}

TEST(OverallBound, OrthogonalEnsemble) {
  const Ensemble e({basis_state(3, 0), basis_state(3, 1), basis_state(3, 2)});
  const OverallCheck c = overall_bound_check(e, 2, 0.5, SubDetectorStrategy::Pgm);
  EXPECT_NEAR(c.lhs, 0.0, 1e-12);
  EXPECT_NEAR(c.rhs, 0.0, 1e-12);
  EXPECT_TRUE(c.holds);
}

TEST(OverallBound, OrthogonalThirdState) {
  ComplexMatrix m1 = ComplexMatrix::Zero(3, 3);
  ComplexMatrix m2 = ComplexMatrix::Zero(3, 3);
  m1.topLeftCorner(2, 2) = random_density(2, 2, 5).matrix();
  m2.topLeftCorner(2, 2) = random_density(2, 2, 6).matrix();
  const Ensemble e({density_from_matrix(m1), density_from_matrix(m2), basis_state(3, 2)});
  const OverallCheck c = overall_bound_check(e, 4, 0.5, SubDetectorStrategy::Pgm);
  const double w = oracle::helstrom_error(tensor_power(e[0], 4).matrix(), tensor_power(e[1], 4).matrix());
  EXPECT_NEAR(c.lhs, w, 1e-9);
  EXPECT_NEAR(c.rhs, 2.0 * w, 1e-9);
  EXPECT_TRUE(c.holds);
}

TEST(OverallBound, HoldsOnSeededScenarios) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Ensemble e = qubit_ensemble(3, seed);
    for (int n : {2, 4, 6}) {
      for (SubDetectorStrategy sub : {SubDetectorStrategy::Pgm, SubDetectorStrategy::Recursive}) {
        const OverallCheck c = overall_bound_check(e, n, 0.5, sub);
        const double wedge_n = oracle::helstrom_error(tensor_power(e[0], n).matrix(), tensor_power(e[1], n).matrix());
        const double rhs = 2.0 * wedge_n + 4.0 * (c.split.report.sub_err_1 + c.split.report.sub_err_2);
        EXPECT_NEAR(c.rhs, rhs, 1e-10);
        EXPECT_LE(c.lhs, rhs + 1e-9) << "seed " << seed << " n " << n << " " << to_string(sub);
        EXPECT_TRUE(c.holds);
        EXPECT_TRUE(c.lemma_holds);
        EXPECT_NEAR(c.errors.err_sm + c.errors.succ_sm, 3.0, 1e-9);
      }
    }
  }
}

TEST(BinaryBound, Examples) {
  const DensityMatrix rho = random_density(2, 2, 1);
  for (const auto& row : binary_chernoff_upper_check(rho, rho, 3)) {
    EXPECT_NEAR(row.err_sm, 1.0, 1e-12);
    EXPECT_EQ(row.bound, 1.0);
    EXPECT_TRUE(row.holds);
  }
  for (const auto& row : binary_chernoff_upper_check(basis_state(2, 0), basis_state(2, 1), 3)) {
    EXPECT_NEAR(row.err_sm, 0.0, 1e-14);
    EXPECT_TRUE(row.holds);
  }
  EXPECT_EQ(kind_of([&] { binary_chernoff_upper_check(rho, rho, 11, 1024); }), ErrorKind::DimensionCapExceeded);
}

TEST(BinaryBound, HoldsOnSeededQubitPairs) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const DensityMatrix a = random_density(2, 2, 7 * seed);
    const DensityMatrix b = random_density(2, 1 + seed % 2, 7 * seed + 3);
    const double xi = oracle::grid_chernoff(a.matrix(), b.matrix());
    const std::vector<BinaryBoundRow> rows = binary_chernoff_upper_check(a, b, 10, 1024);
    ASSERT_EQ(rows.size(), 10u);
    for (const auto& row : rows) {
      EXPECT_TRUE(row.holds) << "seed " << seed << " n " << row.n;
      EXPECT_LE(row.err_sm, std::exp(-row.n * xi) + 1e-12 + 1e-6 * row.n * std::exp(-row.n * xi));
      // err_sm <= exp(-n xi) puts every single-point rate at or above xi.
      if (row.err_sm > 0.0) EXPECT_GE(-std::log(row.err_sm) / row.n, xi - 1e-6);
    }
  }
}

TEST(ExponentEstimate, ExactExponential) {
  std::vector<ErrorPoint> pts;
  for (int n = 1; n <= 6; ++n) pts.push_back({n, std::exp(-0.3 * n)});
  const ExponentSeries s = exponent_estimate(pts, 4);
  ASSERT_TRUE(s.fitted_slope.has_value());
  EXPECT_NEAR(*s.fitted_slope, 0.3, 1e-12);
  EXPECT_EQ(s.k_fit, 4);
  for (const auto& row : s.rows) EXPECT_NEAR(row.rate, 0.3, 1e-12);
}

TEST(ExponentEstimate, ConstantSeries) {
  std::vector<ErrorPoint> pts;
  for (int n = 1; n <= 5; ++n) pts.push_back({n, 0.5});
  EXPECT_NEAR(*exponent_estimate(pts, 3).fitted_slope, 0.0, 1e-15);
}

TEST(ExponentEstimate, ZeroRows) {
  const std::vector<ErrorPoint> zeros{{1, 0.0}, {2, 0.0}};
  const ExponentSeries all = exponent_estimate(zeros, 2);
  EXPECT_TRUE(all.exact_discrimination);
  EXPECT_FALSE(all.fitted_slope.has_value());
  EXPECT_EQ(all.rows[0].rate, std::numeric_limits<double>::infinity());

  const std::vector<ErrorPoint> mixed{{1, 0.5}, {2, 0.25}, {3, 0.0}};
  const ExponentSeries m = exponent_estimate(mixed, 4);
  EXPECT_EQ(m.zero_rows, std::vector<int>{3});
  EXPECT_EQ(m.k_fit, 2);
  EXPECT_NEAR(*m.fitted_slope, std::log(2.0), 1e-14);

  const std::vector<ErrorPoint> single{{1, 0.5}, {2, 0.0}};
  EXPECT_EQ(kind_of([&] { exponent_estimate(single, 2); }), ErrorKind::Undefined);
  const std::vector<ErrorPoint> unordered{{2, 0.5}, {1, 0.4}};
  EXPECT_EQ(kind_of([&] { exponent_estimate(unordered, 2); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([&] { exponent_estimate(mixed, 1); }), ErrorKind::InvalidArgument);
}

TEST(ExponentEstimate, HelstromSeriesApproachesChernoffFromAbove) {
  const DensityMatrix a = random_density(2, 2, 1001);
  const DensityMatrix b = random_density(2, 2, 1002);
  const double xi = chernoff_distance(a, b).xi;
  std::vector<ErrorPoint> pts;
  for (const auto& row : binary_chernoff_upper_check(a, b, 10, 1024))
    if (row.n >= 2) pts.push_back({row.n, row.err_sm});
  const ExponentSeries s = exponent_estimate(pts, 5);
  EXPECT_GT(*s.fitted_slope, 0.0);
  // The polynomial prefactor of err_sm keeps the finite-n slope above xi.
  EXPECT_GE(*s.fitted_slope, xi - 1e-9);
  for (const auto& row : s.rows) EXPECT_GE(row.rate, xi - 1e-9);
}

TEST(RunExperiment, BinaryTableMatchesHelstromCheck) {
  const Ensemble e = qubit_ensemble(2, 3);
  ExperimentConfig config;
  config.n_min = 1;
  config.n_max = 8;
  const ExperimentTable t = run_experiment(e, config);
  const std::vector<BinaryBoundRow> rows = binary_chernoff_upper_check(e[0], e[1], 8);
  ASSERT_EQ(t.rows.size(), 8u);
  for (std::size_t k = 0; k < 8; ++k) {
    EXPECT_EQ(t.rows[k].n, rows[k].n);
    EXPECT_NEAR(t.rows[k].errors.err_sm, rows[k].err_sm, 1e-15);
    EXPECT_NEAR(t.rows[k].binary_bound, rows[k].bound, 1e-15);
    EXPECT_TRUE(t.rows[k].povm.valid);
  }
  EXPECT_FALSE(t.condition.has_value());
  EXPECT_EQ(t.reference_level, t.xi(0, 1));
}

TEST(RunExperiment, OrthogonalEnsembleIsExact) {
  const Ensemble e({basis_state(3, 0), basis_state(3, 1), basis_state(3, 2)});
  ExperimentConfig config;
  config.n_max = 4;
  const ExperimentTable t = run_experiment(e, config);
  for (const auto& row : t.rows) EXPECT_NEAR(row.errors.err_sm, 0.0, 1e-12);
  EXPECT_TRUE(t.series.exact_discrimination);
  EXPECT_FALSE(t.series.fitted_slope.has_value());
}

TEST(RunExperiment, ConditionSatisfyingEnsembleDecays) {
  GenParams params;
  params.seed = 7;
  const Scenario s = scenario_from_json(generate_scenario(params));
  ExperimentConfig config;
  config.n_min = 2;
  config.n_max = 10;
  const ExperimentTable t = run_experiment(s.ensemble, config);
  ASSERT_TRUE(t.condition.has_value());
  EXPECT_TRUE(t.condition->holds);
  EXPECT_NEAR(t.reference_level, std::min(t.xi(0, 1), *t.xi_bar_12 / 6.0), 0.0);
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    EXPECT_LT(t.rows[k].errors.err_sm, t.rows[k - 1].errors.err_sm) << "n " << t.rows[k].n;
  }
  for (const auto& row : t.rows) {
    EXPECT_TRUE(row.lemma_holds);
    EXPECT_TRUE(row.overall_holds);
    EXPECT_TRUE(row.povm.valid);
  }
}

TEST(RunExperiment, ConfigValidation) {
  const Ensemble e = qubit_ensemble(3, 1);
  ExperimentConfig config;
  config.n_max = 11;
  config.dim_cap = 1024;
  EXPECT_EQ(kind_of([&] { run_experiment(e, config); }), ErrorKind::DimensionCapExceeded);
  config = {};
  config.n_min = 1;
  EXPECT_EQ(kind_of([&] { run_experiment(e, config); }), ErrorKind::SplitTooSmall);
  config = {};
  config.w1 = 1.5;
  EXPECT_EQ(kind_of([&] { run_experiment(e, config); }), ErrorKind::InvalidArgument);
}

TEST(RunExperiment, WarnsWhenClosestPairIsNotFirst) {
  const DensityMatrix a = random_density(2, 2, 1);
  const DensityMatrix b = random_density(2, 1, 2);
  const Ensemble e({a, b, mix(a, random_density(2, 2, 3), 0.01)});
  ExperimentConfig config;
  config.n_max = 3;
  const ExperimentTable t = run_experiment(e, config);
  EXPECT_EQ(t.mqcb.pair, (IndexPair{0, 2}));
  ASSERT_FALSE(t.warnings.empty());
  EXPECT_NE(t.warnings.front().find("(1,3)"), std::string::npos);
}

}  // namespace
}  // namespace mqht
