#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

#include "mqht/chernoff.hpp"
#include "mqht/evaluation.hpp"

namespace mqht {

/// Shortest decimal that parses back to the same binary64 value; non-finite
/// values print as inf, -inf and nan.
std::string format_double(double value);

inline constexpr std::string_view kCsvHeader =
    "n,n1,n2,err_sm,err_avg,rate,binary_bound,reference_level,overall_rhs,lemma_holds,overall_holds";

std::string experiment_csv(const ExperimentTable& table);
nlohmann::json experiment_json(const ExperimentTable& table);

/// Plain-text key=value report: pairwise distances, the multiple Chernoff
/// bound, its pair, xi_bar at that pair and the attainability condition.
std::string chernoff_report(const Ensemble& ensemble);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace mqht
