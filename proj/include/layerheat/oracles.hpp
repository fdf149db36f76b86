#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "layerheat/evaluate.hpp"

namespace layerheat {

/// Relative sup error E = max|u - U| / max|u| over a shared grid at one
/// output time, the computed field u in the denominator.
struct ErrorReport {
  double error = 0.0;
  bool excluded_endpoints = false;
  int grid_size = 0;
  double time = 0.0;
};

ErrorReport relative_error(const SolutionField& computed,
                           const SolutionField& reference, double t,
                           bool exclude_endpoints);

/// Separation-of-variables reference for a single effective material
/// (equal sigmas, perfect contact) under constant Dirichlet data:
/// U = line + sum b_m e^{-(sigma m pi / L)^2 t} sin(m pi x / L), with the
/// coefficients of the initial data integrated in closed form.
double fourier_series_solution(const ValidatedProblem& problem, double x,
                               double t, int terms = 400);

SolutionField fourier_series_field(const ValidatedProblem& problem,
                                   const std::vector<double>& times,
                                   int grid_points, bool include_breakpoints,
                                   int terms = 400);

/// Unconditionally stable second-order finite-difference oracle. Interfaces
/// carry one unknown per side; the discrete interface and Robin conditions
/// use one-sided 3-point derivative stencils at the new time level.
class CrankNicolson {
public:
  CrankNicolson(const ValidatedProblem& problem, int cells_per_layer, double dt);

  void advance_to(double t);
  double time() const { return time_; }

  /// One-sided value at x (shifted coordinate); at an interior breakpoint
  /// `layer` picks the side.
  double sample(double x, int layer) const;
  double sample_flux(double x, int layer) const;

  SolutionField field(const std::vector<double>& times, int grid_points,
                      bool include_breakpoints);

private:
  void step();
  int node_base(int layer) const { return (layer - 1) * (cells_ + 1); }

  const ValidatedProblem* problem_;
  int cells_;
  double dt_;
  double time_ = 0.0;
  std::vector<double> h_;  // cell width per layer
  Eigen::VectorXd u_;
  Eigen::SparseMatrix<double> lhs_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver_;
  Eigen::SparseMatrix<double> rhs_interior_;  // explicit half of the step
};

/// Piecewise-linear t -> infinity profile under constant boundary data.
struct SteadyState {
  double flux = 0.0;                 // sigma_j^2 u_x, constant across x
  std::vector<double> left_value;    // per layer, value at its left edge
  std::vector<double> slope;         // per layer

  double value(double x, int layer, const ValidatedProblem& problem) const;
};

SteadyState steady_state_profile(const ValidatedProblem& problem);

}  // namespace layerheat
