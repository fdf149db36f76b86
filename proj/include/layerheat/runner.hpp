#pragma once

#include <iosfwd>

#include "layerheat/config.hpp"
#include "layerheat/oracles.hpp"

namespace layerheat {

/// Exit codes shared by the CLI commands.
/// 0 ok, 1 config parse error, 2 validation failure, 3 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

SolutionField compute_field(const RunConfig& config, Method method);

void write_field_csv(std::ostream& out, const SolutionField& field,
                     const RunConfig& config, Method method);

int run_solve(const RunConfig& config, std::ostream& log, std::ostream& err);

struct CompareResult {
  std::vector<ErrorReport> reports;
};

int run_compare(const RunConfig& config, std::ostream& log, std::ostream& err,
                CompareResult* result = nullptr);

/// Explicitly-set command-line overrides applied on top of a built-in
/// example configuration.
struct ConfigPatch {
  std::optional<std::vector<double>> times;
  std::optional<int> grid;
  std::optional<double> theta_max;
  std::optional<int> contour_count;
  std::optional<double> fixed_T;
  std::optional<std::string> output;
  std::optional<int> threads;
  std::optional<Method> compare_to;
};

int run_example(const std::string& name, const ConfigPatch& patch,
                std::ostream& log, std::ostream& err);

}  // namespace layerheat
