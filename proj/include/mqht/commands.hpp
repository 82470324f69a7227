#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mqht/error.hpp"
#include "mqht/evaluation.hpp"
#include "mqht/scenario.hpp"

namespace mqht {

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kValidation = 1;
inline constexpr int kParse = 2;
inline constexpr int kResourceCap = 3;
}  // namespace exit_code

int exit_code_for(ErrorKind kind);

enum class OutputFormat { Csv, Json };

struct RunOptions {
  ExperimentConfig config;
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::filesystem::path> out;
};

struct VerifyOptions {
  int trials = 100;
  std::uint64_t seed = 1;
  bool inject_fault = false;  // scale one detector element by 1.1 in the POVM suite
};

struct SuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
  double worst = 0.0;  // largest violation seen (suite-specific units)
};

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options);

struct GenOptions {
  GenParams params;
  std::optional<std::filesystem::path> out;
};

// Each command writes its product to `out` (or the --out file) and
// diagnostics to `err`, and returns the process exit code.
int cmd_chernoff(const std::filesystem::path& scenario, const std::optional<std::filesystem::path>& out_path,
                 std::ostream& out, std::ostream& err);
int cmd_run(const std::filesystem::path& scenario, const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);
int cmd_gen(const GenOptions& options, std::ostream& out, std::ostream& err);

}  // namespace mqht
