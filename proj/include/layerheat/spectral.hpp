#pragma once

#include <optional>
#include <string>
#include <vector>

#include "layerheat/assembly.hpp"
#include "layerheat/contour.hpp"

namespace layerheat {

enum class NodeProvenance { Solved, Interpolated };

/// Scaled spectral unknowns along one contour half:
/// values.row(i) = e^{-nu_i^2 scale_time} X(nu_i^2, T).
struct SpectralTable {
  ContourGrid grid;
  double horizon = 0.0;     // T
  double scale_time = 0.0;  // exponential scaling absorbed into the values
  ComplexMatrix values;     // count x (2n+4)
  std::vector<double> residuals;
  std::vector<NodeProvenance> provenance;

  int solved_count() const;
  double interpolated_fraction() const;
  double max_residual() const;

  /// Columnar text dump: theta, Re/Im of each component, residual, provenance.
  void dump(const std::string& path) const;
};

/// Dense solve with partial pivoting on the equilibrated system. Returns
/// the unknown vector (scaled convention when the rhs was scaled) and the
/// relative residual ||A x - y|| / ||y||.
std::pair<ComplexVector, double> solve_at_node(const SpectralSystem& system);

/// Log-magnitude of det of the equilibrated matrix (diagnostic for the
/// nonsingularity of A(nu) along the contour).
double log_abs_det_equilibrated(const SpectralSystem& system);

/// min |pivot| / max |pivot| of the pivoted factorization; a scale-free
/// nonsingularity margin (1e-12 floor flags an approaching det zero, while
/// benign row-scaling magnitudes cancel out).
double pivot_ratio(const SpectralSystem& system);

struct TableOptions {
  std::optional<double> scale_time;  // default: = horizon
  int threads = 1;
  double max_interpolated_fraction = 0.2;
  // Treat nodes whose raw (unequilibrated) entries exceed 1e300 as
  // overflowed even though the equilibrated system is representable;
  // reproduces runs limited by the plain double range.
  bool raw_overflow = false;
};

/// Solve the interface system at every node of `grid` with the rhs scaled
/// by e^{-nu^2 scale_time}. Nodes whose assembly overflows are filled by
/// monotone piecewise-cubic Hermite interpolation of Re/Im of each scaled
/// component as functions of theta, using the nearest solved nodes; more
/// than max_interpolated_fraction such nodes raises TooManyOverflowNodes.
SpectralTable build_spectral_table(const ValidatedProblem& problem,
                                   const ContourGrid& grid, double horizon,
                                   const TableOptions& options = {});

}  // namespace layerheat
