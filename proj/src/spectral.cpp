#include "layerheat/spectral.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace layerheat {

namespace {

// Fritsch-Carlson monotone cubic Hermite slopes for (x_i, y_i).
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      double w1 = 2.0 * h[i] + h[i - 1];
      double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  auto end_slope = [](double h0, double h1, double d0, double d1) {
    double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (d * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return d;
  };
  d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

// Evaluate the Hermite interpolant at xq; beyond the data range the end
// cubic is continued but clamped to the magnitude of the end value, which
// keeps extrapolated tails from outgrowing the decaying data they extend.
double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& d, double xq) {
  const std::size_t n = x.size();
  if (n == 1) return y[0];
  std::size_t i = 0;
  if (xq <= x.front()) {
    i = 0;
  } else if (xq >= x.back()) {
    i = n - 2;
  } else {
    i = static_cast<std::size_t>(
            std::upper_bound(x.begin(), x.end(), xq) - x.begin()) - 1;
  }
  double h = x[i + 1] - x[i];
  double s = (xq - x[i]) / h;
  double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  double h10 = s * (1 - s) * (1 - s);
  double h01 = s * s * (3 - 2 * s);
  double h11 = s * s * (s - 1);
  double v = h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
  if (xq < x.front() || xq > x.back()) {
    double edge = (xq < x.front()) ? y.front() : y.back();
    double cap = std::abs(edge);
    v = std::clamp(v, -cap, cap);
  }
  return v;
}

}  // namespace

int SpectralTable::solved_count() const {
  return static_cast<int>(
      std::count(provenance.begin(), provenance.end(), NodeProvenance::Solved));
}

double SpectralTable::interpolated_fraction() const {
  if (provenance.empty()) return 0.0;
  return 1.0 - static_cast<double>(solved_count()) /
                   static_cast<double>(provenance.size());
}

double SpectralTable::max_residual() const {
  double m = 0.0;
  for (std::size_t i = 0; i < residuals.size(); ++i)
    if (provenance[i] == NodeProvenance::Solved)
      m = std::max(m, residuals[i]);
  return m;
}

void SpectralTable::dump(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw SolverError(ErrorCode::ConfigParse, "cannot open " + path);
  std::fprintf(f, "# theta");
  for (int c = 0; c < values.cols(); ++c)
    std::fprintf(f, " re_x%d im_x%d", c, c);
  std::fprintf(f, " residual provenance\n");
  for (int i = 0; i < values.rows(); ++i) {
    std::fprintf(f, "%.17g", grid.theta[i]);
    for (int c = 0; c < values.cols(); ++c)
      std::fprintf(f, " %.17g %.17g", values(i, c).real(), values(i, c).imag());
    std::fprintf(f, " %.17g %s\n", residuals[i],
                 provenance[i] == NodeProvenance::Solved ? "solved"
                                                         : "interpolated");
  }
  std::fclose(f);
}

std::pair<ComplexVector, double> solve_at_node(const SpectralSystem& system) {
  Eigen::PartialPivLU<ComplexMatrix> lu(system.matrix);
  const double max_entry = system.matrix.cwiseAbs().maxCoeff();
  const double pivot_floor = 1e-14 * max_entry;
  for (int i = 0; i < system.matrix.rows(); ++i) {
    if (std::abs(lu.matrixLU()(i, i)) < pivot_floor)
      throw SolverError(ErrorCode::SingularNode,
                        "effective rank deficiency at nu = (" +
                            std::to_string(system.node.real()) + ", " +
                            std::to_string(system.node.imag()) + ")");
  }
  ComplexVector x = lu.solve(system.rhs);
  const double ynorm = system.rhs.norm();
  double residual = 0.0;
  if (ynorm > 0.0) {
    residual = (system.matrix * x - system.rhs).norm() / ynorm;
    if (residual > 1e-12) {  // one refinement step
      ComplexVector dx = lu.solve(system.rhs - system.matrix * x);
      x += dx;
      residual = (system.matrix * x - system.rhs).norm() / ynorm;
    }
  }
  return {std::move(x), residual};
}

double log_abs_det_equilibrated(const SpectralSystem& system) {
  Eigen::PartialPivLU<ComplexMatrix> lu(system.matrix);
  double log_det = 0.0;
  for (int i = 0; i < system.matrix.rows(); ++i)
    log_det += std::log(std::abs(lu.matrixLU()(i, i)) + 1e-300);
  return log_det;
}

double pivot_ratio(const SpectralSystem& system) {
  Eigen::PartialPivLU<ComplexMatrix> lu(system.matrix);
  double lo = 1e308, hi = 0.0;
  for (int i = 0; i < system.matrix.rows(); ++i) {
    double p = std::abs(lu.matrixLU()(i, i));
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  return hi > 0.0 ? lo / hi : 0.0;
}

SpectralTable build_spectral_table(const ValidatedProblem& problem,
                                   const ContourGrid& grid, double horizon,
                                   const TableOptions& options) {
  const int count = grid.count();
  const int dim = problem.system_size();
  const double tau = options.scale_time.value_or(horizon);

  SpectralTable table;
  table.grid = grid;
  table.horizon = horizon;
  table.scale_time = tau;
  table.values = ComplexMatrix::Zero(count, dim);
  table.residuals.assign(count, 0.0);
  table.provenance.assign(count, NodeProvenance::Solved);

  std::vector<char> overflowed(count, 0);
  auto solve_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      try {
        SpectralSystem sys = assemble_system(problem, grid.nu[i], horizon, tau);
        if (options.raw_overflow && sys.max_raw_log > 690.0)
          throw SolverError(ErrorCode::OverflowAtArgument,
                            "raw entry exceeds 1e300");
        auto [x, residual] = solve_at_node(sys);
        table.values.row(i) = x.transpose();
        table.residuals[i] = residual;
      } catch (const SolverError& err) {
        if (err.code() != ErrorCode::OverflowAtArgument) throw;
        overflowed[i] = 1;
      }
    }
  };

  const int threads = std::max(1, options.threads);
  if (threads == 1 || count < 2 * threads) {
    solve_range(0, count);
  } else {
    std::vector<std::thread> pool;
    int chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      int begin = t * chunk;
      int end = std::min(count, begin + chunk);
      if (begin < end) pool.emplace_back(solve_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  int n_over = 0;
  for (int i = 0; i < count; ++i)
    if (overflowed[i]) {
      table.provenance[i] = NodeProvenance::Interpolated;
      ++n_over;
    }
  if (n_over == 0) return table;
  if (static_cast<double>(n_over) >
      options.max_interpolated_fraction * static_cast<double>(count))
    throw SolverError(
        ErrorCode::TooManyOverflowNodes,
        std::to_string(n_over) + " of " + std::to_string(count) +
            " contour nodes overflow; the problem scaling is off");

  std::vector<double> th_solved;
  th_solved.reserve(count - n_over);
  std::vector<int> idx_solved;
  for (int i = 0; i < count; ++i)
    if (!overflowed[i]) {
      th_solved.push_back(grid.theta[i]);
      idx_solved.push_back(i);
    }
  if (th_solved.size() < 2)
    throw SolverError(ErrorCode::TooManyOverflowNodes, "nothing left to solve");

  std::vector<double> re(idx_solved.size()), im(idx_solved.size());
  for (int c = 0; c < dim; ++c) {
    for (std::size_t s = 0; s < idx_solved.size(); ++s) {
      re[s] = table.values(idx_solved[s], c).real();
      im[s] = table.values(idx_solved[s], c).imag();
    }
    auto dre = pchip_slopes(th_solved, re);
    auto dim_ = pchip_slopes(th_solved, im);
    for (int i = 0; i < count; ++i)
      if (overflowed[i])
        table.values(i, c) = {pchip_eval(th_solved, re, dre, grid.theta[i]),
                              pchip_eval(th_solved, im, dim_, grid.theta[i])};
  }
  return table;
}

}  // namespace layerheat
