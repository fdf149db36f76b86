#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "layerheat/problem.hpp"

namespace layerheat {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// One interface linear system A(nu) X = Y at a single contour node, after
/// row equilibration. Each row has been scaled by e^{-max Re exponent} of
/// its entries (an exact power of e applied before any entry is formed), so
/// the stored matrix stays representable far along the contour where the
/// raw exponential factors overflow. log_row_scale keeps the per-row
/// exponents; raw quantities are scaled * e^{log_row_scale}.
struct SpectralSystem {
  ComplexMatrix matrix;
  ComplexVector rhs;
  Eigen::VectorXd log_row_scale;
  std::complex<double> node;       // nu
  double horizon = 0.0;            // T
  double scale_time = 0.0;         // rhs premultiplied by e^{-nu^2 scale_time}
  bool scaled = false;
  double max_raw_log = 0.0;        // largest ln|entry| before equilibration
};

/// Matrix of the imperfect-contact system with raw (unequilibrated)
/// entries, ordered for X = (g1_1, g0_1..g0_{n+1}, h0_1..h0_{n+1}, h1_{n+1}).
/// Throws WrongInterfaceKind for perfect problems and OverflowAtArgument
/// when an entry exceeds the floating range.
ComplexMatrix assemble_imperfect(const ValidatedProblem& problem,
                                 std::complex<double> nu);

/// Perfect-contact counterpart, ordered for
/// X = (g0_1..g0_{n+1}, h0_{n+1}, g1_1..g1_{n+1}, h1_{n+1}).
ComplexMatrix assemble_perfect(const ValidatedProblem& problem,
                               std::complex<double> nu);

/// Right-hand side Y(nu, T), optionally premultiplied by e^{-nu^2 scale_time}.
ComplexVector assemble_rhs(const ValidatedProblem& problem,
                           std::complex<double> nu, double horizon,
                           std::optional<double> scale_time = std::nullopt);

/// Equilibrated system for the solve pipeline; matches the raw assemblers
/// up to the recorded row scales. OverflowAtArgument signals a node whose
/// scaled entries or right-hand side still cannot be represented.
SpectralSystem assemble_system(const ValidatedProblem& problem,
                               std::complex<double> nu, double horizon,
                               std::optional<double> scale_time = std::nullopt);

}  // namespace layerheat
