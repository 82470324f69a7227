#pragma once

// Scenario files: a JSON document with a mandatory version, the Hilbert-space
// dimension and one spec per state. State references inside a scenario are
// 1-based, matching the pair numbering in reports.
//
//   {"version": 1, "dim": 2,
//    "states": [{"matrix": [[[re, im], ...], ...]},
//               {"pure": [[re, im], ...]},
//               {"classical": [p1, p2, ...]},
//               {"random": {"rank": 2, "seed": 42}},
//               {"mix": {"base": 1, "other": 2 | {<state spec>}, "epsilon": 0.1}}],
//    "labels": ["a", "b", ...]}

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

#include "mqht/states.hpp"

namespace mqht {

inline constexpr int kScenarioVersion = 1;

struct Scenario {
  int version = kScenarioVersion;
  std::size_t dim = 0;
  Ensemble ensemble;
};

/// Throws Error(ParseError) with "origin:line:column" for malformed JSON and a
/// field path such as "states[2].random.seed" for schema errors; invalid
/// states surface with their own ErrorKind.
Scenario parse_scenario(std::string_view text, std::string_view origin = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);
Scenario scenario_from_json(const nlohmann::json& doc, std::string_view origin = "<scenario>");

/// Pretty-printed document with a trailing newline.
std::string dump_scenario(const nlohmann::json& doc);

enum class GenKind { ConditionSatisfying, EquidistantClassical, Random };

std::optional<GenKind> parse_gen_kind(std::string_view text);
std::string_view to_string(GenKind kind);

struct GenParams {
  GenKind kind = GenKind::ConditionSatisfying;
  std::size_t r = 3;
  std::size_t d = 2;
  std::uint64_t seed = 1;
  double target_xi = 0.1;      // equidistant-classical: pairwise distance to place
  std::optional<std::size_t> rank;  // random: state rank (default d)
};

inline constexpr int kCalibrationSteps = 60;

/// Builds a scenario document. condition-satisfying bisects the mixing weight
/// epsilon in rho2 = mix(rho1, sigma, epsilon) until xi12 <= 0.9 * xi_bar12 / 6
/// and re-checks the reloaded scenario; throws CalibrationFailed otherwise.
nlohmann::json generate_scenario(const GenParams& params);

}  // namespace mqht
