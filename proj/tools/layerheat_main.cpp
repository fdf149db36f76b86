#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "layerheat/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Unified-transform solver for layered heat diffusion"};
  app.require_subcommand(1);

  std::string config_path, output_path, oracle, example_name;
  std::vector<double> times;
  int grid = 0, nodes = 0, threads = 0;
  double theta_max = 0.0, fixed_T = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON configuration file");
    cmd->add_option("--times", times, "Output times")->delimiter(',');
    cmd->add_option("--grid", grid, "Spatial grid points");
    cmd->add_option("--output", output_path, "Data file path");
    cmd->add_option("--theta-max", theta_max, "Contour truncation");
    cmd->add_option("--nodes", nodes, "Contour node count");
    cmd->add_option("--fixed-T", fixed_T, "Fixed spectral horizon");
    cmd->add_option("--threads", threads, "Worker thread cap");
  };

  CLI::App* solve = app.add_subcommand("solve", "Solve a configured problem");
  add_common(solve);
  CLI::App* compare =
      app.add_subcommand("compare", "Solve and compare against an oracle");
  add_common(compare);
  compare->add_option("--oracle", oracle, "Reference method: fd or fourier");
  CLI::App* example = app.add_subcommand("example", "Run a built-in example");
  example->add_option("name", example_name, "A, A0, B, C, D, E, E19 or F")
      ->required();
  add_common(example);

  CLI11_PARSE(app, argc, argv);

  using namespace layerheat;
  try {
    if (app.got_subcommand(example)) {
      ConfigPatch patch;
      if (!times.empty()) patch.times = times;
      if (grid > 0) patch.grid = grid;
      if (!output_path.empty()) patch.output = output_path;
      if (theta_max > 0.0) patch.theta_max = theta_max;
      if (nodes > 0) patch.contour_count = nodes;
      if (fixed_T > 0.0) patch.fixed_T = fixed_T;
      if (threads > 0) patch.threads = threads;
      if (!oracle.empty()) patch.compare_to = method_from_string(oracle);
      return run_example(example_name, patch, std::cout, std::cerr);
    }
    if (config_path.empty()) {
      std::cerr << "--config is required\n";
      return kExitConfig;
    }
    RunConfig cfg = load_config(config_path);
    if (!times.empty()) cfg.times = times;
    if (grid > 0) cfg.grid = grid;
    if (!output_path.empty()) cfg.output = output_path;
    if (theta_max > 0.0) cfg.contour.theta_max = theta_max;
    if (nodes > 0) cfg.contour.count = nodes;
    if (fixed_T > 0.0) cfg.contour.fixed_T = fixed_T;
    if (threads > 0) cfg.threads = threads;
    if (!oracle.empty()) cfg.compare_to = method_from_string(oracle);
    if (app.got_subcommand(compare)) return run_compare(cfg, std::cout, std::cerr);
    return run_solve(cfg, std::cout, std::cerr);
  } catch (const SolverError& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::ConfigParse || e.code() == ErrorCode::UnknownExample
               ? kExitConfig
               : kExitNumerical;
  }
}
