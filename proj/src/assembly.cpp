#include "layerheat/assembly.hpp"

#include <cmath>
#include <vector>

#include "layerheat/transforms.hpp"

namespace layerheat {

namespace {

using Complex = std::complex<double>;

constexpr double kRawOverflowLog = 690.0;  // ln(1e300) ~ 690.8

struct Entry {
  int col;
  Complex coeff;
  Complex exponent;
};

using Row = std::vector<Entry>;

// Rows of the imperfect system, in exponent form. Unknown columns:
// g1^(1) -> 0, g0^(j) -> j, h0^(j) -> n+1+j, h1^(n+1) -> 2n+3.
std::vector<Row> imperfect_rows(const ValidatedProblem& p, Complex nu) {
  const int n = p.num_interfaces();
  const int dim = 2 * n + 4;
  const Complex i(0.0, 1.0);
  std::vector<Row> rows(dim);

  const auto& b = p.boundary();
  rows[0] = {{0, b.beta2, 0.0}, {1, b.beta1, 0.0}};
  rows[dim - 1] = {{2 * n + 2, b.beta3, 0.0}, {2 * n + 3, b.beta4, 0.0}};

  for (int sign = 0; sign < 2; ++sign) {
    // sign 0: global relations at +nu (rows 1..n+1);
    // sign 1: the nu -> -nu family (rows n+2..2n+2).
    const Complex v = (sign == 0) ? nu : -nu;
    for (int j = 1; j <= n + 1; ++j) {
      Row& row = rows[sign * (n + 1) + j];
      const double sj = p.sigma(j);
      const Complex e_right = -i * v * p.breakpoint(j) / sj;
      const Complex e_left = -i * v * p.breakpoint(j - 1) / sj;
      if (j <= n) {
        const double H = p.contact_coeff(j);
        row.push_back({j + 1, H, e_right});                       // g0^(j+1)
        row.push_back({n + 1 + j, i * sj * v - H, e_right});      // h0^(j)
      } else {
        row.push_back({2 * n + 2, i * sj * v, e_right});          // h0^(n+1)
        row.push_back({2 * n + 3, sj * sj, e_right});             // h1^(n+1)
      }
      if (j == 1) {
        row.push_back({0, -sj * sj, e_left});                     // g1^(1)
        row.push_back({1, -i * sj * v, e_left});                  // g0^(1)
      } else {
        const double H = p.contact_coeff(j - 1);
        row.push_back({j, -(H + i * sj * v), e_left});            // g0^(j)
        row.push_back({n + j, H, e_left});                        // h0^(j-1)
      }
    }
  }
  return rows;
}

// Perfect-contact rows. Unknown columns:
// g0^(j) -> j-1, h0^(n+1) -> n+1, g1^(j) -> n+1+j, h1^(n+1) -> 2n+3.
std::vector<Row> perfect_rows(const ValidatedProblem& p, Complex nu) {
  const int n = p.num_interfaces();
  const int dim = 2 * n + 4;
  const Complex i(0.0, 1.0);
  std::vector<Row> rows(dim);

  const auto& b = p.boundary();
  rows[0] = {{0, b.beta1, 0.0}, {n + 2, b.beta2, 0.0}};
  rows[dim - 1] = {{n + 1, b.beta3, 0.0}, {2 * n + 3, b.beta4, 0.0}};

  for (int sign = 0; sign < 2; ++sign) {
    const Complex v = (sign == 0) ? nu : -nu;
    for (int j = 1; j <= n + 1; ++j) {
      Row& row = rows[sign * (n + 1) + j];
      const double sj = p.sigma(j);
      const Complex e_right = -i * v * p.breakpoint(j) / sj;
      const Complex e_left = -i * v * p.breakpoint(j - 1) / sj;
      if (j <= n) {
        const double sj1 = p.sigma(j + 1);
        row.push_back({j, i * sj * v, e_right});                  // g0^(j+1)
        row.push_back({n + 2 + j, sj1 * sj1, e_right});           // g1^(j+1)
      } else {
        row.push_back({n + 1, i * sj * v, e_right});              // h0^(n+1)
        row.push_back({2 * n + 3, sj * sj, e_right});             // h1^(n+1)
      }
      row.push_back({j - 1, -i * sj * v, e_left});                // g0^(j)
      row.push_back({n + 1 + j, -sj * sj, e_left});               // g1^(j)
    }
  }
  return rows;
}

std::vector<Row> system_rows(const ValidatedProblem& p, Complex nu) {
  return p.kind() == ContactKind::Imperfect ? imperfect_rows(p, nu)
                                            : perfect_rows(p, nu);
}

// Scaled transform of the initial data entering row `row` (1-based layer j
// at +nu for rows 1..n+1, at -nu for rows n+2..2n+2).
Complex rhs_entry(const ValidatedProblem& p, int row, Complex nu, double horizon,
                  double tau) {
  const int n = p.num_interfaces();
  const int dim = 2 * n + 4;
  const Complex scale_exp = -nu * nu * tau;
  if (row == 0)
    return boundary_transform_scaled(p.boundary().f_left, nu * nu, horizon, tau);
  if (row == dim - 1)
    return boundary_transform_scaled(p.boundary().f_right, nu * nu, horizon, tau);
  const bool minus = row > n + 1;
  const int j = minus ? row - (n + 1) : row;
  const Complex k = (minus ? -nu : nu) / p.sigma(j);
  return -initial_transform_scaled(p, j, k, scale_exp);
}

ComplexMatrix assemble_raw(const ValidatedProblem& p, Complex nu, bool imperfect) {
  if ((p.kind() == ContactKind::Imperfect) != imperfect)
    throw SolverError(ErrorCode::WrongInterfaceKind,
                      imperfect ? "problem has perfect contact"
                                : "problem has imperfect contact");
  auto rows = system_rows(p, nu);
  const int dim = p.system_size();
  ComplexMatrix A = ComplexMatrix::Zero(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (const Entry& e : rows[r]) {
      double lg = e.exponent.real() + std::log(std::abs(e.coeff) + 1e-300);
      if (lg > kRawOverflowLog)
        throw SolverError(ErrorCode::OverflowAtArgument,
                          "raw matrix entry exceeds 1e300 at nu = (" +
                              std::to_string(nu.real()) + ", " +
                              std::to_string(nu.imag()) + ")");
      A(r, e.col) += e.coeff * std::exp(e.exponent);
    }
  return A;
}

}  // namespace

ComplexMatrix assemble_imperfect(const ValidatedProblem& problem, Complex nu) {
  return assemble_raw(problem, nu, true);
}

ComplexMatrix assemble_perfect(const ValidatedProblem& problem, Complex nu) {
  return assemble_raw(problem, nu, false);
}

ComplexVector assemble_rhs(const ValidatedProblem& problem, Complex nu,
                           double horizon, std::optional<double> scale_time) {
  const int dim = problem.system_size();
  const double tau = scale_time.value_or(0.0);
  ComplexVector y(dim);
  for (int r = 0; r < dim; ++r)
    y(r) = rhs_entry(problem, r, nu, horizon, tau);
  return y;
}

SpectralSystem assemble_system(const ValidatedProblem& problem, Complex nu,
                               double horizon, std::optional<double> scale_time) {
  const int dim = problem.system_size();
  const double tau = scale_time.value_or(0.0);
  auto rows = system_rows(problem, nu);

  SpectralSystem sys;
  sys.matrix = ComplexMatrix::Zero(dim, dim);
  sys.rhs = ComplexVector::Zero(dim);
  sys.log_row_scale = Eigen::VectorXd::Zero(dim);
  sys.node = nu;
  sys.horizon = horizon;
  sys.scale_time = tau;
  sys.scaled = scale_time.has_value();
  sys.max_raw_log = 0.0;

  for (int r = 0; r < dim; ++r) {
    double max_log = -1e308;
    for (const Entry& e : rows[r]) {
      double lg = e.exponent.real() + std::log(std::abs(e.coeff) + 1e-300);
      max_log = std::max(max_log, lg);
    }
    sys.max_raw_log = std::max(sys.max_raw_log, max_log);
    sys.log_row_scale(r) = max_log;
    for (const Entry& e : rows[r]) {
      Complex scaled_exp = e.exponent - max_log;
      if (scaled_exp.real() > kRawOverflowLog)
        throw SolverError(ErrorCode::OverflowAtArgument,
                          "equilibrated entry exceeds 1e300");
      sys.matrix(r, e.col) += e.coeff * std::exp(scaled_exp);
    }
    // Right-hand side entry, carrying both the e^{-nu^2 tau} scaling and
    // the row scale; overflow here marks the node for interpolation.
    const Complex scale_exp = -nu * nu * tau;
    if (r == 0) {
      sys.rhs(r) = std::exp(-max_log) *
                   boundary_transform_scaled(problem.boundary().f_left, nu * nu,
                                             horizon, tau);
    } else if (r == dim - 1) {
      sys.rhs(r) = std::exp(-max_log) *
                   boundary_transform_scaled(problem.boundary().f_right, nu * nu,
                                             horizon, tau);
    } else {
      const int n = problem.num_interfaces();
      const bool minus = r > n + 1;
      const int j = minus ? r - (n + 1) : r;
      const Complex k = (minus ? -nu : nu) / problem.sigma(j);
      sys.rhs(r) = -initial_transform_scaled(problem, j, k,
                                             scale_exp - Complex(max_log, 0.0));
    }
    if (!std::isfinite(sys.rhs(r).real()) || !std::isfinite(sys.rhs(r).imag()))
      throw SolverError(ErrorCode::OverflowAtArgument,
                        "right-hand side not representable after row scaling");
  }
  return sys;
}

}  // namespace layerheat
