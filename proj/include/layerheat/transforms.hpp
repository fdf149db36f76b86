#pragma once

#include <complex>
#include <map>
#include <shared_mutex>

#include "layerheat/problem.hpp"

namespace layerheat {

using Complex = std::complex<double>;

/// Spectral transform of the initial data of layer `layer` (1-based):
///   u0hat_j(k) = integral over [x_{j-1}, x_j] of e^{-ikx} u0_j(x) dx,
/// in the shifted coordinate (x0 = 0). Closed forms for constant and
/// polynomial data, exact piecewise-linear integration for sampled data.
/// Throws OverflowAtArgument when |Im k| is too large for the plain value;
/// the scaled variant below is the safe pipeline entry point.
Complex initial_transform(const ValidatedProblem& problem, int layer, Complex k);

/// e^{extra} * u0hat_layer(k), with the exponent folded into each additive
/// term so intermediate factors never overflow. Terms whose combined
/// exponent still exceeds the double range raise OverflowAtArgument.
Complex initial_transform_scaled(const ValidatedProblem& problem, int layer,
                                 Complex k, Complex extra);

/// ftilde(omega, t) = integral_0^t e^{omega s} f(s) ds.
Complex boundary_transform(const TimeSignal& signal, Complex omega, double t);

/// e^{-omega*tau} * ftilde(omega, T), exponent-safe.
Complex boundary_transform_scaled(const TimeSignal& signal, Complex omega,
                                  double horizon, double tau);

/// Pure memo over the two transform families. Concurrent readers and
/// writers are serialized with a shared mutex; values are bit-identical to
/// fresh evaluation.
class TransformCache {
public:
  explicit TransformCache(const ValidatedProblem& problem) : problem_(&problem) {}

  Complex initial(int layer, Complex k) const;
  Complex boundary(bool right_side, Complex omega, double t) const;

  std::size_t size() const;

private:
  const ValidatedProblem* problem_;
  using InitialKey = std::tuple<int, double, double>;
  using BoundaryKey = std::tuple<int, double, double, double>;
  mutable std::map<InitialKey, Complex> initial_memo_;
  mutable std::map<BoundaryKey, Complex> boundary_memo_;
  mutable std::shared_mutex mutex_;
};

}  // namespace layerheat
