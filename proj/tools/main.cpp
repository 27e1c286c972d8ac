// sparsecert: exactness certificates for cardinality-constrained ridge regression.

#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace sparsecert;

  CLI::App app{"Exactness certificates for semidefinite relaxations of sparse ridge regression"};
  app.require_subcommand(1);

  std::string instance_path;
  std::vector<Index> support;
  cli::CheckFlags check_flags;
  auto* check = app.add_subcommand("check", "Search PWG and DCL certificates for a support");
  check->add_option("instance", instance_path, "Instance JSON file")->required();
  check->add_option("--support", support, "Support indices (overrides the file)")->delimiter(',');
  check->add_option("--tol", check_flags.dcl.tol, "Relative bracket width for the bisection")
      ->capture_default_str();
  check->add_option("--max-iter", check_flags.dcl.max_iter, "Bisection iteration cap")
      ->capture_default_str();

  std::uint64_t max_combinations = kDefaultMaxCombinations;
  auto* oracle = app.add_subcommand("oracle", "Brute-force nu_l0 and the continuous PWG value");
  oracle->add_option("instance", instance_path, "Instance JSON file")->required();
  oracle->add_option("--max-combinations", max_combinations, "Enumeration budget")
      ->capture_default_str();

  std::string config_path;
  std::string output_path;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "Gaussian-ensemble recovery sweep");
  sweep->add_option("config", config_path, "Sweep config JSON")->required();
  sweep->add_option("output", output_path, "Per-trial CSV (aggregate goes to <output>.agg.csv)")
      ->required();
  sweep->add_option("--workers", workers, "Worker threads")->capture_default_str();

  std::string agg_path;
  std::string svg_path;
  auto* plot = app.add_subcommand("plot", "Render an aggregate CSV as SVG");
  plot->add_option("aggregate", agg_path, "Aggregate CSV")->required();
  plot->add_option("output", svg_path, "Output SVG")->required();

  auto* selftest = app.add_subcommand("selftest", "Check built-in reference values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInputError;
  }

  if (check->parsed()) {
    if (!support.empty()) check_flags.support = support;
    return cli::cmd_check(instance_path, check_flags, std::cout, std::cerr);
  }
  if (oracle->parsed()) return cli::cmd_oracle(instance_path, max_combinations, std::cout, std::cerr);
  if (sweep->parsed()) {
    return cli::cmd_sweep(config_path, output_path, workers, std::getenv("SPARSECERT_SEED"),
                          std::cout, std::cerr);
  }
  if (plot->parsed()) return cli::cmd_plot(agg_path, svg_path, std::cout, std::cerr);
  if (selftest->parsed()) return cli::cmd_selftest(std::cout, std::cerr);
  return cli::kExitInputError;
}
