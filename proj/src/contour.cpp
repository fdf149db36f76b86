#include "layerheat/contour.hpp"

#include <cmath>

namespace layerheat {

ContourGrid contour_nodes(ContourHalf half, double theta_max, int count,
                          double radius) {
  if (theta_max <= 0.0)
    throw SolverError(ErrorCode::OutOfDomain, "theta_max must be positive");
  if (count < 16)
    throw SolverError(ErrorCode::OutOfDomain, "contour needs at least 16 nodes");

  ContourGrid grid;
  grid.half = half;
  grid.theta_max = theta_max;
  grid.radius = radius;
  grid.theta.resize(count);
  grid.nu.resize(count);
  grid.weight.resize(count);

  // Plus: nu = i sin(pi/8 - i theta), theta increasing runs the curve from
  // the upper-left to the upper-right, the orientation that replaces the
  // left-to-right real line. Minus is the negated curve; theta increasing
  // runs lower-right to lower-left, the positively oriented lower boundary.
  const double dtheta = 2.0 * theta_max / (count - 1);
  const std::complex<double> sign = (half == ContourHalf::Plus)
                                        ? std::complex<double>(1.0, 0.0)
                                        : std::complex<double>(-1.0, 0.0);
  for (int i = 0; i < count; ++i) {
    double th = -theta_max + i * dtheta;
    std::complex<double> arg(M_PI / 8.0, -th);
    grid.theta[i] = th;
    grid.nu[i] = sign * std::complex<double>(0.0, 1.0) * std::sin(arg) * radius;
    double trap = (i == 0 || i == count - 1) ? 0.5 : 1.0;
    grid.weight[i] = sign * std::cos(arg) * radius * dtheta * trap;
  }
  return grid;
}

RealAxisGrid real_axis_nodes(double sigma, double t, double tol, double length) {
  if (t <= 0.0)
    throw SolverError(ErrorCode::NonPositiveTime,
                      "real-axis grid needs t > 0 (t = 0 bypasses quadrature)");
  const double logtol = std::log(1.0 / tol);
  const double K = std::sqrt(logtol) / (sigma * std::sqrt(t));

  // Spacing: the trapezoid error shifts the contour by c in Im k, paying
  // e^{sigma^2 c^2 t + c w - 2 pi c / dk}; keep the exponent below -log(1/tol)
  // with w = 2 * length, and always resolve e^{ikx} with >= 4 nodes per period.
  const double w = 2.0 * length;
  double dk_strip = 2.0 * M_PI / (w + 2.0 * sigma * std::sqrt(t * logtol));
  double dk = std::min(M_PI / (2.0 * length), dk_strip);
  int half_count = std::max(8, static_cast<int>(std::ceil(K / dk)));

  RealAxisGrid grid;
  grid.truncation = half_count * dk;
  int count = 2 * half_count + 1;
  grid.k.resize(count);
  grid.weight.resize(count);
  for (int i = 0; i < count; ++i) {
    grid.k[i] = (i - half_count) * dk;
    grid.weight[i] = (i == 0 || i == count - 1) ? 0.5 * dk : dk;
  }
  return grid;
}

}  // namespace layerheat
