#include "mqht/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "mqht/error.hpp"

namespace mqht {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

namespace {

json json_number(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

json pair_json(const IndexPair& pair) { return json::array({pair.i + 1, pair.j + 1}); }

const char* flag(bool value) { return value ? "true" : "false"; }

}  // namespace

std::string experiment_csv(const ExperimentTable& table) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : table.rows) {
    out += std::to_string(row.n) + ',' + std::to_string(row.n1) + ',' + std::to_string(row.n2) + ',' +
           format_double(row.errors.err_sm) + ',' + format_double(row.errors.err_avg) + ',' + format_double(row.rate) +
           ',' + format_double(row.binary_bound) + ',' + format_double(row.reference_level) + ',' +
           format_double(row.overall_rhs) + ',' + flag(row.lemma_holds) + ',' + flag(row.overall_holds) + '\n';
  }
  return out;
}

json experiment_json(const ExperimentTable& table) {
  json xi = json::array();
  for (Eigen::Index i = 0; i < table.xi.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < table.xi.cols(); ++j) row.push_back(json_number(table.xi(i, j)));
    xi.push_back(row);
  }
  json rows = json::array();
  for (const auto& row : table.rows) {
    json errors = json::array();
    for (double e : row.errors.per_state_error) errors.push_back(json_number(e));
    rows.push_back({{"n", row.n},
                    {"n1", row.n1},
                    {"n2", row.n2},
                    {"err_sm", json_number(row.errors.err_sm)},
                    {"err_avg", json_number(row.errors.err_avg)},
                    {"per_state_error", errors},
                    {"rate", json_number(row.rate)},
                    {"binary_bound", json_number(row.binary_bound)},
                    {"reference_level", json_number(row.reference_level)},
                    {"overall_rhs", json_number(row.overall_rhs)},
                    {"lemma_rhs", json_number(row.lemma_rhs)},
                    {"lemma_holds", row.lemma_holds},
                    {"overall_holds", row.overall_holds},
                    {"povm_valid", row.povm.valid}});
  }
  json out{{"r", table.r},
           {"dim", table.dim},
           {"config",
            {{"n_min", table.config.n_min},
             {"n_max", table.config.n_max},
             {"w1", table.config.w1},
             {"sub", std::string(to_string(table.config.sub))},
             {"k_fit", table.config.k_fit},
             {"dim_cap", table.config.dim_cap}}},
           {"xi", xi},
           {"mqcb", {{"value", json_number(table.mqcb.value)}, {"pair", pair_json(table.mqcb.pair)}}},
           {"reference_level", json_number(table.reference_level)},
           {"rows", rows}};
  out["xi_bar_12"] = table.xi_bar_12 ? json_number(*table.xi_bar_12) : json(nullptr);
  if (table.condition) {
    const ConditionReport& c = *table.condition;
    out["condition"] = {{"pair", pair_json(c.pair)},     {"xi_ij", json_number(c.xi_ij)},
                        {"xi_bar", json_number(c.xi_bar)}, {"mqcb", json_number(c.mqcb)},
                        {"holds", c.holds},                {"margin", json_number(c.margin)}};
  } else {
    out["condition"] = nullptr;
  }
  out["fitted_slope"] = table.series.fitted_slope ? json_number(*table.series.fitted_slope) : json(nullptr);
  out["k_fit_used"] = table.series.k_fit;
  out["exact_discrimination"] = table.series.exact_discrimination;
  out["warnings"] = table.warnings;
  return out;
}

std::string chernoff_report(const Ensemble& ensemble) {
  const PairwiseChernoff table(ensemble);
  std::ostringstream out;
  out << "r=" << ensemble.size() << '\n';
  out << "dim=" << ensemble.dim() << '\n';
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    for (std::size_t j = i + 1; j < ensemble.size(); ++j) {
      out << "pair=" << i + 1 << ',' << j + 1 << " xi=" << format_double(table.xi(i, j))
          << " s_star=" << format_double(table.s_star(i, j)) << '\n';
    }
  }
  const MqcbResult least = mqcb(table);
  out << "mqcb=" << format_double(least.value) << '\n';
  out << "least_favorable_pair=" << least.pair.i + 1 << ',' << least.pair.j + 1 << '\n';
  if (ensemble.size() >= 3) {
    const ConditionReport c = theorem_condition(table);
    out << "xi_bar=" << format_double(c.xi_bar) << '\n';
    out << "condition_threshold=" << format_double(c.xi_bar / 6.0) << '\n';
    out << "condition_holds=" << flag(c.holds) << '\n';
    out << "condition_margin=" << format_double(c.margin) << '\n';
  } else {
    out << "xi_bar=undefined\n";
    out << "condition_holds=undefined\n";
  }
  return out.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::InvalidArgument, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::InvalidArgument, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace mqht
