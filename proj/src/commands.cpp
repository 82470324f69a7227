#include "mqht/commands.hpp"

#include <cmath>
#include <ostream>

#include "mqht/random.hpp"
#include "mqht/report.hpp"

namespace mqht {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return exit_code::kParse;
    case ErrorKind::DimensionCapExceeded: return exit_code::kResourceCap;
    default: return exit_code::kValidation;
  }
}

namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kValidation;
  }
}

void emit(const std::optional<std::filesystem::path>& path, const std::string& content, std::ostream& out) {
  if (path) {
    write_file_atomic(*path, content);
  } else {
    out << content;
  }
}

double grid_minimum(const ChernoffCurve& curve, double step) {
  const int points = static_cast<int>(std::lround(1.0 / step));
  double best = curve(0.0);
  for (int k = 1; k <= points; ++k) best = std::min(best, curve(static_cast<double>(k) / points));
  return best;
}

}  // namespace

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options) {
  SuiteResult lemma{"lemma_inequality"};
  SuiteResult r_squared{"r_squared_below_partials"};
  SuiteResult povm{"povm_validity"};
  SuiteResult wedge_identity{"wedge_trace_identity"};
  SuiteResult chernoff_grid{"chernoff_vs_grid"};

  auto record = [](SuiteResult& suite, bool ok, double violation) {
    (ok ? suite.passed : suite.failed) += 1;
    suite.worst = std::max(suite.worst, violation);
  };

  SplitMix64 seeds(options.seed);
  for (int t = 0; t < options.trials; ++t) {
    const std::size_t r = (t % 2 == 0) ? 3 : 4;
    std::vector<DensityMatrix> states;
    for (std::size_t k = 0; k < r; ++k) states.push_back(random_density(2, 2, seeds.next()));
    const std::vector<ComplexMatrix> partials = random_feasible_partials(2, r - 2, seeds.next());
    const LemmaCheck check =
        lemma_bound_check(states[0], states[1], partials, std::span<const DensityMatrix>(states).subspan(2));
    record(lemma, check.holds, std::max(0.0, check.lhs - check.rhs));

    const CompositionTrace& trace = check.composed.trace;
    const bool r_ok = trace.r_squared_margin >= -tol::kRSquared && trace.r_min_eigenvalue >= -tol::kPsd &&
                      trace.r_max_eigenvalue <= 1.0 + tol::kPsd;
    record(r_squared, r_ok, std::max(0.0, -trace.r_squared_margin));

    std::vector<Detector> detectors{check.composed.detector, holevo_helstrom(states[0], states[1]), pgm(states)};
    if (options.inject_fault && t == 0) detectors.front().elements.front() *= 1.1;
    for (const auto& detector : detectors) {
      const PovmCheck pc = check_povm(detector);
      record(povm, pc.valid, std::max(pc.identity_deviation, std::max(0.0, -pc.min_eigenvalue)));
    }

    const std::size_t d = (t % 2 == 0) ? 2 : 3;
    const DensityMatrix a = random_density(d, d, seeds.next());
    const DensityMatrix b = random_density(d, 1 + (t % d), seeds.next());
    const double expected = 1.0 - trace_norm(a.matrix() - b.matrix()) / 2.0;
    const double gap = std::abs(real_trace(wedge(a, b)) - expected);
    record(wedge_identity, gap <= 1e-10, gap);

    const DensityMatrix c = random_density(2, 2, seeds.next());
    const DensityMatrix e = random_density(2, 2, seeds.next());
    const double xi_golden = chernoff_distance(c, e).xi;
    const double xi_grid = -std::log(grid_minimum(ChernoffCurve(c, e), 1e-4));
    const double diff = std::abs(xi_golden - xi_grid);
    record(chernoff_grid, diff <= 1e-6, diff);
  }
  return {lemma, r_squared, povm, wedge_identity, chernoff_grid};
}

int cmd_chernoff(const std::filesystem::path& scenario, const std::optional<std::filesystem::path>& out_path,
                 std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(scenario);
    emit(out_path, chernoff_report(sc.ensemble), out);
    return exit_code::kSuccess;
  });
}

int cmd_run(const std::filesystem::path& scenario, const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(scenario);
    const ExperimentTable table = run_experiment(sc.ensemble, options.config);
    const std::string content =
        options.format == OutputFormat::Csv ? experiment_csv(table) : experiment_json(table).dump(2) + "\n";
    emit(options.out, content, out);
    if (table.series.exact_discrimination) {
      err << "fitted_slope=exact_discrimination\n";
    } else if (table.series.fitted_slope) {
      err << "fitted_slope=" << format_double(*table.series.fitted_slope) << " k_fit=" << table.series.k_fit << '\n';
    }
    err << "mqcb=" << format_double(table.mqcb.value) << " reference_level=" << format_double(table.reference_level)
        << '\n';
    for (const auto& w : table.warnings) err << "warning: " << w << '\n';
    bool all_hold = true;
    for (const auto& row : table.rows) all_hold = all_hold && row.lemma_holds && row.overall_holds && row.povm.valid;
    return all_hold ? exit_code::kSuccess : exit_code::kValidation;
  });
}

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.trials < 0) throw Error(ErrorKind::InvalidArgument, "trials must be >= 0");
    const std::vector<SuiteResult> suites = run_verify_suites(options);
    bool ok = true;
    for (const auto& s : suites) {
      out << (s.failed == 0 ? "PASS " : "FAIL ") << s.name << " passed=" << s.passed << " failed=" << s.failed
          << " worst=" << format_double(s.worst) << '\n';
      ok = ok && s.failed == 0;
    }
    out << (ok ? "all suites passed" : "verification FAILED") << '\n';
    return ok ? exit_code::kSuccess : exit_code::kValidation;
  });
}

int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    emit(options.out, dump_scenario(generate_scenario(options.params)), out);
    return exit_code::kSuccess;
  });
}

}  // namespace mqht
