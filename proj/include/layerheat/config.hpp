#pragma once

#include <optional>
#include <string>

#include "layerheat/problem.hpp"

namespace layerheat {

struct ContourConfig {
  double theta_max = 12.0;
  int count = 2401;
  double radius = 1.0;
  std::optional<double> fixed_T;
  bool raw_overflow = false;
};

enum class Method { Utm, Fd, Fourier };

Method method_from_string(const std::string& name);
std::string method_name(Method m);

struct RunConfig {
  Problem problem;
  std::vector<double> times{0.1};
  int grid = 401;
  Method method = Method::Utm;
  std::optional<Method> compare_to;
  ContourConfig contour;
  std::string output;
  bool flux = false;
  int threads = 1;
  int fourier_terms = 400;
  int fd_cells_per_layer = 200;
  double fd_dt = 1e-4;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

/// Built-in configurations reproducing the shipped experiments:
/// A, A0 (A with a homogeneous right end), B, C, D, E (199 interfaces),
/// E19 (reduced stack), F. Unknown names raise UnknownExample.
RunConfig example_config(const std::string& name);

}  // namespace layerheat
