#pragma once

#include <complex>
#include <vector>

#include "layerheat/errors.hpp"

namespace layerheat {

enum class ContourHalf { Plus, Minus };

/// Quadrature grid on one deformed boundary contour, parameterized as
/// nu(theta) = radius * (+-i) sin(pi/8 - i theta) on a symmetric, equally
/// spaced theta grid. Weights carry d(nu)/d(theta) times the composite
/// trapezoid coefficient, so a contour integral is sum f(nu_i) * weight_i
/// traversed in the orientation the solution formulas expect.
struct ContourGrid {
  ContourHalf half = ContourHalf::Plus;
  double theta_max = 0.0;
  double radius = 1.0;
  std::vector<double> theta;
  std::vector<std::complex<double>> nu;
  std::vector<std::complex<double>> weight;

  int count() const { return static_cast<int>(theta.size()); }
};

ContourGrid contour_nodes(ContourHalf half, double theta_max, int count,
                          double radius = 1.0);

/// Truncated, symmetric trapezoid grid on the real k axis for the
/// initial-condition term of one layer at one evaluation time. K satisfies
/// e^{-(sigma K)^2 t} < tol; the spacing resolves e^{ikx} oscillation over
/// a domain of length `length` and the analyticity strip of the Gaussian.
struct RealAxisGrid {
  double truncation = 0.0;  // K
  std::vector<double> k;
  std::vector<double> weight;
};

RealAxisGrid real_axis_nodes(double sigma, double t, double tol, double length);

}  // namespace layerheat
