#pragma once

#include <optional>
#include <vector>

#include "layerheat/spectral.hpp"

namespace layerheat {

/// Truncated real-axis term of the representation for one layer:
/// (1/2pi) integral e^{ikx - (sigma_j k)^2 t} u0hat_j(k) dk. t = 0 is the
/// caller's bypass case and raises NonPositiveTime here.
double evaluate_initial_term(const ValidatedProblem& problem, int layer,
                             double x, double t, double tol = 1e-16);

struct PointValue {
  double value = 0.0;
  double imag_residue = 0.0;
};

/// Full solution u^(j)(x, t) from the spectral tables of both contour
/// halves; x in shifted coordinates, layer chooses the one-sided formula at
/// breakpoints. Tables must satisfy t <= T; a scale_time different from t
/// is compensated per node by e^{-nu^2 (t - scale_time)}.
PointValue evaluate_solution(const ValidatedProblem& problem,
                             const SpectralTable& plus,
                             const SpectralTable& minus, double x, double t,
                             std::optional<int> layer = std::nullopt);

/// sigma_j^2 u_x, same conventions.
PointValue evaluate_flux(const ValidatedProblem& problem,
                         const SpectralTable& plus, const SpectralTable& minus,
                         double x, double t,
                         std::optional<int> layer = std::nullopt);

struct FieldOptions {
  int grid_points = 401;
  bool include_breakpoints = true;  // insert interfaces, report both sides
  bool with_flux = false;
  double theta_max = 12.0;
  int contour_count = 2401;
  double radius = 1.0;
  std::optional<double> fixed_horizon;  // default horizon: T = t per time
  int threads = 1;
  double axis_tol = 1e-16;
  bool raw_overflow = false;  // see TableOptions::raw_overflow
};

/// Solution u (and optionally the flux) on a space-time grid, layer-tagged;
/// x values are reported in the original coordinates.
struct SolutionField {
  std::vector<double> grid_x;
  std::vector<int> layer;  // layer index per grid point (one-sided at breaks)
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // [time][point]
  std::vector<std::vector<double>> flux;    // [time][point] when requested

  double max_imag_residue = 0.0;
  double max_solve_residual = 0.0;
  double interpolated_fraction = 0.0;
  bool endpoint_caveat = false;  // nonhomogeneous data evaluated at an endpoint

  int find_point(double x, int layer_tag) const;
};

std::pair<std::vector<double>, std::vector<int>> standard_grid(
    const ValidatedProblem& problem, int points, bool include_breakpoints);

SolutionField evaluate_field(const ValidatedProblem& problem,
                             const std::vector<double>& times,
                             const FieldOptions& options = {});

}  // namespace layerheat
