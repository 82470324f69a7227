// mqht: batch front end for multiple quantum hypothesis testing experiments.
//
//   mqht chernoff <scenario> [--out FILE]
//   mqht run <scenario> [--n-min --n-max --w1 --sub pgm|recursive --k-fit --dim-cap --format csv|json --out FILE]
//   mqht verify [--trials N --seed S --inject-fault]
//   mqht gen <condition-satisfying|equidistant-classical|random> [--r --d --seed --xi --rank --out FILE]

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "mqht/commands.hpp"

int main(int argc, char** argv) {
  using namespace mqht;

  CLI::App app{"Multiple quantum hypothesis testing: Chernoff bounds, detectors and error exponents"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;

  auto* chernoff = app.add_subcommand("chernoff", "Pairwise Chernoff distances, MQCB and the attainability condition");
  chernoff->add_option("scenario", scenario_path, "Scenario file")->required();
  chernoff->add_option("--out", out_path, "Write the report here instead of stdout");

  RunOptions run_options;
  std::string sub_name = "pgm";
  std::string format_name = "csv";
  auto* run = app.add_subcommand("run", "Error sums of the split detector over a range of copy numbers");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--n-min", run_options.config.n_min, "Smallest copy number")->capture_default_str();
  run->add_option("--n-max", run_options.config.n_max, "Largest copy number")->capture_default_str();
  run->add_option("--w1", run_options.config.w1, "Copy fraction for the first sub-detector")->capture_default_str();
  run->add_option("--sub", sub_name, "Sub-detector strategy")
      ->check(CLI::IsMember({"pgm", "recursive"}))
      ->capture_default_str();
  run->add_option("--k-fit", run_options.config.k_fit, "Points in the exponent fit")->capture_default_str();
  run->add_option("--dim-cap", run_options.config.dim_cap, "Largest allowed d^n")->capture_default_str();
  run->add_option("--format", format_name, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  run->add_option("--out", out_path, "Write the table here instead of stdout");

  VerifyOptions verify_options;
  auto* verify = app.add_subcommand("verify", "Randomized invariant suites");
  verify->add_option("--trials", verify_options.trials, "Trials per suite")->capture_default_str();
  verify->add_option("--seed", verify_options.seed, "Base seed")->capture_default_str();
  verify->add_flag("--inject-fault", verify_options.inject_fault, "Corrupt one detector to exercise the failure path");

  GenOptions gen_options;
  std::string kind_name;
  std::size_t rank = 0;
  auto* gen = app.add_subcommand("gen", "Generate a scenario file");
  gen->add_option("kind", kind_name, "Scenario kind")
      ->required()
      ->check(CLI::IsMember({"condition-satisfying", "equidistant-classical", "random"}));
  gen->add_option("--r", gen_options.params.r, "Number of states")->capture_default_str();
  gen->add_option("--d", gen_options.params.d, "Dimension")->capture_default_str();
  gen->add_option("--seed", gen_options.params.seed, "Seed")->capture_default_str();
  gen->add_option("--xi", gen_options.params.target_xi, "Pairwise distance (equidistant-classical)")
      ->capture_default_str();
  gen->add_option("--rank", rank, "State rank (random; default d)");
  gen->add_option("--out", out_path, "Write the scenario here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::kSuccess : exit_code::kParse;
  }

  std::optional<std::filesystem::path> out;
  if (!out_path.empty()) out = out_path;

  if (chernoff->parsed()) return cmd_chernoff(scenario_path, out, std::cout, std::cerr);
  if (run->parsed()) {
    run_options.config.sub = *parse_strategy(sub_name);
    run_options.format = format_name == "json" ? OutputFormat::Json : OutputFormat::Csv;
    run_options.out = out;
    return cmd_run(scenario_path, run_options, std::cout, std::cerr);
  }
  if (verify->parsed()) return cmd_verify(verify_options, std::cout, std::cerr);
  if (gen->parsed()) {
    gen_options.params.kind = *parse_gen_kind(kind_name);
    if (rank > 0) gen_options.params.rank = rank;
    gen_options.out = out;
    return cmd_gen(gen_options, std::cout, std::cerr);
  }
  return exit_code::kParse;
}
