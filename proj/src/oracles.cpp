#include "layerheat/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace layerheat {

namespace {

bool signal_constant(const TimeSignal& s, double* value) {
  if (const auto* c = std::get_if<TimeSignal::Constant>(&s.data)) {
    *value = c->value;
    return true;
  }
  if (const auto* p = std::get_if<TimeSignal::Polynomial>(&s.data)) {
    for (std::size_t i = 1; i < p->coeffs.size(); ++i)
      if (p->coeffs[i] != 0.0) return false;
    *value = p->coeffs.empty() ? 0.0 : p->coeffs[0];
    return true;
  }
  return false;
}

// integral over [a,b] of x^r sin(w x) dx and the cosine partner, by the
// usual integration-by-parts ladder.
void power_trig_integrals(double a, double b, double w, int deg,
                          std::vector<double>& S, std::vector<double>& C) {
  S.assign(deg + 1, 0.0);
  C.assign(deg + 1, 0.0);
  double sa = std::sin(w * a), sb = std::sin(w * b);
  double ca = std::cos(w * a), cb = std::cos(w * b);
  S[0] = (ca - cb) / w;
  C[0] = (sb - sa) / w;
  double apow = 1.0, bpow = 1.0;
  for (int r = 1; r <= deg; ++r) {
    apow *= a;
    bpow *= b;
    S[r] = (apow * ca - bpow * cb) / w + (r / w) * C[r - 1];
    C[r] = (bpow * sb - apow * sa) / w - (r / w) * S[r - 1];
  }
}

std::vector<double> shift_polynomial(const std::vector<double>& coeffs,
                                     double shift) {
  // p(x + shift) as a polynomial in x.
  std::vector<double> c(coeffs.size(), 0.0);
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    double binom = 1.0, spow = 1.0;
    for (std::size_t r = 0; r <= m; ++r) {
      c[m - r] += coeffs[m] * binom * spow;
      binom *= static_cast<double>(m - r) / static_cast<double>(r + 1);
      spow *= shift;
    }
  }
  return c;
}

// Dirichlet values at the two ends; UnsupportedSetup unless the problem is
// a single effective material with constant Dirichlet data.
void fourier_preconditions(const ValidatedProblem& p, double* a, double* b) {
  if (p.kind() != ContactKind::Perfect)
    throw SolverError(ErrorCode::UnsupportedSetup,
                      "fourier oracle needs perfect contact");
  for (int j = 2; j <= p.num_layers(); ++j)
    if (std::abs(p.sigma(j) - p.sigma(1)) > 1e-14)
      throw SolverError(ErrorCode::UnsupportedSetup,
                        "fourier oracle needs a single effective material");
  const auto& bd = p.boundary();
  if (bd.beta2 != 0.0 || bd.beta4 != 0.0 || bd.beta1 == 0.0 || bd.beta3 == 0.0)
    throw SolverError(ErrorCode::UnsupportedSetup,
                      "fourier oracle needs Dirichlet ends");
  double f1, f2;
  if (!signal_constant(bd.f_left, &f1) || !signal_constant(bd.f_right, &f2))
    throw SolverError(ErrorCode::UnsupportedSetup,
                      "fourier oracle needs constant boundary data");
  *a = f1 / bd.beta1;
  *b = f2 / bd.beta3;
}

// Sine coefficients of (u0 - line) on [0, L].
std::vector<double> fourier_coefficients(const ValidatedProblem& p, double a,
                                         double b, int terms) {
  const double L = p.right();
  std::vector<double> bm(terms + 1, 0.0);
  const double slope = (b - a) / L;
  for (int m = 1; m <= terms; ++m) {
    const double w = m * M_PI / L;
    double sum = 0.0;
    for (int j = 1; j <= p.num_layers(); ++j) {
      const double xa = p.breakpoint(j - 1);
      const double xb = p.breakpoint(j);
      const InitialCondition& ic = p.initial(j);
      if (const auto* smp = std::get_if<InitialCondition::Sampled>(&ic.data)) {
        // Piecewise-linear data: each segment minus the line is linear.
        const auto& pts = smp->points;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
          double pa = std::max(xa, pts[i].first - p.shift());
          double pb = std::min(xb, pts[i + 1].first - p.shift());
          if (pb <= pa) continue;
          double fa = ic.value(pa + p.shift()) - (a + slope * pa);
          double fb = ic.value(pb + p.shift()) - (a + slope * pb);
          double seg_slope = (fb - fa) / (pb - pa);
          std::vector<double> S, C;
          power_trig_integrals(pa, pb, w, 1, S, C);
          sum += (fa - seg_slope * pa) * S[0] + seg_slope * S[1];
        }
        continue;
      }
      std::vector<double> coeffs;
      if (const auto* cst = std::get_if<InitialCondition::Constant>(&ic.data))
        coeffs = {cst->value};
      else
        coeffs = std::get<InitialCondition::PolynomialInX>(ic.data).coeffs;
      coeffs = shift_polynomial(coeffs, p.shift());
      if (coeffs.size() < 2) coeffs.resize(2, 0.0);
      coeffs[0] -= a;
      coeffs[1] -= slope;
      std::vector<double> S, C;
      power_trig_integrals(xa, xb, w, static_cast<int>(coeffs.size()) - 1, S, C);
      for (std::size_t r = 0; r < coeffs.size(); ++r) sum += coeffs[r] * S[r];
    }
    bm[m] = 2.0 / L * sum;
  }
  return bm;
}

}  // namespace

double fourier_series_solution(const ValidatedProblem& problem, double x,
                               double t, int terms) {
  double a, b;
  fourier_preconditions(problem, &a, &b);
  auto bm = fourier_coefficients(problem, a, b, terms);
  const double L = problem.right();
  const double sigma = problem.sigma(1);
  double u = a + (b - a) * x / L;
  for (int m = 1; m <= terms; ++m) {
    double lambda = sigma * m * M_PI / L;
    u += bm[m] * std::exp(-lambda * lambda * t) * std::sin(m * M_PI * x / L);
  }
  return u;
}

SolutionField fourier_series_field(const ValidatedProblem& problem,
                                   const std::vector<double>& times,
                                   int grid_points, bool include_breakpoints,
                                   int terms) {
  double a, b;
  fourier_preconditions(problem, &a, &b);
  auto bm = fourier_coefficients(problem, a, b, terms);
  const double L = problem.right();
  const double sigma = problem.sigma(1);

  SolutionField field;
  auto [xs, layers] = standard_grid(problem, grid_points, include_breakpoints);
  field.layer = layers;
  field.times = times;
  field.grid_x.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    field.grid_x[i] = xs[i] + problem.shift();
  for (double t : times) {
    std::vector<double> row(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (t == 0.0) {
        row[i] = problem.initial(layers[i]).value(xs[i] + problem.shift());
        continue;
      }
      double u = a + (b - a) * xs[i] / L;
      for (int m = 1; m <= terms; ++m) {
        double lambda = sigma * m * M_PI / L;
        u += bm[m] * std::exp(-lambda * lambda * t) * std::sin(m * M_PI * xs[i] / L);
      }
      row[i] = u;
    }
    field.values.push_back(std::move(row));
  }
  return field;
}

CrankNicolson::CrankNicolson(const ValidatedProblem& problem, int cells_per_layer,
                             double dt)
    : problem_(&problem), cells_(cells_per_layer), dt_(dt) {
  if (cells_ < 3)
    throw SolverError(ErrorCode::UnsupportedSetup,
                      "one-sided stencils need at least 3 cells per layer");
  const int layers = problem.num_layers();
  const int N = layers * (cells_ + 1);
  h_.resize(layers + 1);
  for (int j = 1; j <= layers; ++j) h_[j] = problem.width(j) / cells_;

  u_.resize(N);
  for (int j = 1; j <= layers; ++j)
    for (int i = 0; i <= cells_; ++i) {
      double x = problem.breakpoint(j - 1) + i * h_[j];
      u_(node_base(j) + i) = problem.initial(j).value(x + problem.shift());
    }

  std::vector<Eigen::Triplet<double>> lhs, rhs;
  auto add_both = [&](int r, int c, double l, double rr) {
    lhs.emplace_back(r, c, l);
    if (rr != 0.0) rhs.emplace_back(r, c, rr);
  };

  const auto& bd = problem.boundary();
  const int n = problem.num_interfaces();
  // Left Robin row, imposed at the new time level.
  {
    double h = h_[1];
    add_both(0, 0, bd.beta1 - 3.0 * bd.beta2 / (2.0 * h), 0.0);
    add_both(0, 1, 4.0 * bd.beta2 / (2.0 * h), 0.0);
    add_both(0, 2, -bd.beta2 / (2.0 * h), 0.0);
  }
  // Right Robin row.
  {
    int base = node_base(layers);
    double h = h_[layers];
    add_both(base + cells_, base + cells_, bd.beta3 + 3.0 * bd.beta4 / (2.0 * h), 0.0);
    add_both(base + cells_, base + cells_ - 1, -4.0 * bd.beta4 / (2.0 * h), 0.0);
    add_both(base + cells_, base + cells_ - 2, bd.beta4 / (2.0 * h), 0.0);
  }
  // Interior Crank-Nicolson rows.
  for (int j = 1; j <= layers; ++j) {
    const double r = problem.kappa(j) * dt_ / (2.0 * h_[j] * h_[j]);
    for (int i = 1; i < cells_; ++i) {
      int row = node_base(j) + i;
      add_both(row, row - 1, -r, r);
      add_both(row, row, 1.0 + 2.0 * r, 1.0 - 2.0 * r);
      add_both(row, row + 1, -r, r);
    }
  }
  // Interface rows at the new time level; L is the last node of layer j,
  // R the first node of layer j+1.
  for (int j = 1; j <= n; ++j) {
    int L = node_base(j) + cells_;
    int R = node_base(j + 1);
    double hl = h_[j], hr = h_[j + 1];
    double kl = problem.kappa(j), kr = problem.kappa(j + 1);
    auto left_flux = [&](int row, double scale) {
      add_both(row, L, scale * 3.0 * kl / (2.0 * hl), 0.0);
      add_both(row, L - 1, -scale * 4.0 * kl / (2.0 * hl), 0.0);
      add_both(row, L - 2, scale * kl / (2.0 * hl), 0.0);
    };
    auto right_flux = [&](int row, double scale) {
      add_both(row, R, -scale * 3.0 * kr / (2.0 * hr), 0.0);
      add_both(row, R + 1, scale * 4.0 * kr / (2.0 * hr), 0.0);
      add_both(row, R + 2, -scale * kr / (2.0 * hr), 0.0);
    };
    if (problem.kind() == ContactKind::Perfect) {
      add_both(L, L, 1.0, 0.0);
      add_both(L, R, -1.0, 0.0);
      left_flux(R, 1.0);
      right_flux(R, -1.0);
    } else {
      double H = problem.contact_coeff(j);
      left_flux(L, 1.0);
      add_both(L, R, -H, 0.0);
      add_both(L, L, H, 0.0);
      right_flux(R, 1.0);
      add_both(R, R, -H, 0.0);
      add_both(R, L, H, 0.0);
    }
  }

  lhs_.resize(N, N);
  lhs_.setFromTriplets(lhs.begin(), lhs.end());
  rhs_interior_.resize(N, N);
  rhs_interior_.setFromTriplets(rhs.begin(), rhs.end());
  solver_.compute(lhs_);
  if (solver_.info() != Eigen::Success)
    throw SolverError(ErrorCode::SingularStep, "interface system factorization");
}

void CrankNicolson::step() {
  Eigen::VectorXd b = rhs_interior_ * u_;
  const auto& bd = problem_->boundary();
  b(0) = bd.f_left.value(time_ + dt_);
  b(b.size() - 1) = bd.f_right.value(time_ + dt_);
  u_ = solver_.solve(b);
  if (solver_.info() != Eigen::Success)
    throw SolverError(ErrorCode::SingularStep, "time step solve");
  time_ += dt_;
}

void CrankNicolson::advance_to(double t) {
  while (time_ + dt_ <= t + 1e-12) step();
  double rem = t - time_;
  if (rem > 1e-12) {
    // Single shortened step so samples land exactly on the target time.
    CrankNicolson tail(*problem_, cells_, rem);
    tail.u_ = u_;
    tail.time_ = time_;
    tail.step();
    u_ = tail.u_;
    time_ = t;
  }
}

double CrankNicolson::sample(double x, int layer) const {
  const double x0 = problem_->breakpoint(layer - 1);
  double s = (x - x0) / h_[layer];
  int i = std::clamp(static_cast<int>(std::floor(s)), 0, cells_ - 1);
  double frac = s - i;
  int base = node_base(layer);
  return (1.0 - frac) * u_(base + i) + frac * u_(base + i + 1);
}

double CrankNicolson::sample_flux(double x, int layer) const {
  const double x0 = problem_->breakpoint(layer - 1);
  int i = std::clamp(static_cast<int>(std::round((x - x0) / h_[layer])), 0, cells_);
  int base = node_base(layer);
  double h = h_[layer];
  double d;
  if (i == 0)
    d = (-3.0 * u_(base) + 4.0 * u_(base + 1) - u_(base + 2)) / (2.0 * h);
  else if (i == cells_)
    d = (3.0 * u_(base + cells_) - 4.0 * u_(base + cells_ - 1) +
         u_(base + cells_ - 2)) / (2.0 * h);
  else
    d = (u_(base + i + 1) - u_(base + i - 1)) / (2.0 * h);
  return problem_->kappa(layer) * d;
}

SolutionField CrankNicolson::field(const std::vector<double>& times,
                                   int grid_points, bool include_breakpoints) {
  SolutionField out;
  auto [xs, layers] = standard_grid(*problem_, grid_points, include_breakpoints);
  out.layer = layers;
  out.times = times;
  out.grid_x.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    out.grid_x[i] = xs[i] + problem_->shift();
  for (double t : times) {
    advance_to(t);
    std::vector<double> row(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) row[i] = sample(xs[i], layers[i]);
    out.values.push_back(std::move(row));
  }
  return out;
}

ErrorReport relative_error(const SolutionField& computed,
                           const SolutionField& reference, double t,
                           bool exclude_endpoints) {
  if (computed.grid_x.size() != reference.grid_x.size())
    throw SolverError(ErrorCode::GridMismatch, "grids differ in size");
  for (std::size_t i = 0; i < computed.grid_x.size(); ++i)
    if (std::abs(computed.grid_x[i] - reference.grid_x[i]) > 1e-12)
      throw SolverError(ErrorCode::GridMismatch, "grids differ");
  auto find_time = [t](const SolutionField& f) {
    for (std::size_t i = 0; i < f.times.size(); ++i)
      if (std::abs(f.times[i] - t) < 1e-12) return static_cast<int>(i);
    throw SolverError(ErrorCode::GridMismatch, "time not present in field");
  };
  int tc = find_time(computed), tr = find_time(reference);

  const double x0 = computed.grid_x.front();
  const double x1 = computed.grid_x.back();
  double num = 0.0, den = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < computed.grid_x.size(); ++i) {
    if (exclude_endpoints &&
        (std::abs(computed.grid_x[i] - x0) < 1e-14 ||
         std::abs(computed.grid_x[i] - x1) < 1e-14))
      continue;
    num = std::max(num, std::abs(computed.values[tc][i] - reference.values[tr][i]));
    den = std::max(den, std::abs(computed.values[tc][i]));
    ++used;
  }
  ErrorReport report;
  report.error = den > 0.0 ? num / den : (num > 0.0 ? 1e308 : 0.0);
  report.excluded_endpoints = exclude_endpoints;
  report.grid_size = used;
  report.time = t;
  return report;
}

double SteadyState::value(double x, int layer,
                          const ValidatedProblem& problem) const {
  return left_value[layer - 1] + slope[layer - 1] * (x - problem.breakpoint(layer - 1));
}

SteadyState steady_state_profile(const ValidatedProblem& problem) {
  const auto& bd = problem.boundary();
  double f1, f2;
  if (!signal_constant(bd.f_left, &f1) || !signal_constant(bd.f_right, &f2))
    throw SolverError(ErrorCode::UnsupportedSetup,
                      "steady state needs constant boundary data");

  const int layers = problem.num_layers();
  // Unknowns (a1, F): u_j(x) = a_j + (F / kappa_j)(x - x_{j-1}), with
  // a_{j+1} = a_j + F (w_j / kappa_j + [imperfect] 1/H_j).
  double D = 0.0;
  for (int j = 1; j <= layers; ++j) D += problem.width(j) / problem.kappa(j);
  if (problem.kind() == ContactKind::Imperfect)
    for (int j = 1; j <= problem.num_interfaces(); ++j)
      D += 1.0 / problem.contact_coeff(j);

  const double a11 = bd.beta1, a12 = bd.beta2 / problem.kappa(1);
  const double a21 = bd.beta3, a22 = bd.beta3 * D + bd.beta4 / problem.kappa(layers);
  const double det = a11 * a22 - a12 * a21;
  if (std::abs(det) < 1e-14 * (std::abs(a11 * a22) + std::abs(a12 * a21) + 1e-300))
    throw SolverError(ErrorCode::NoSteadyState,
                      "boundary data does not pin a steady profile");
  const double a1 = (f1 * a22 - a12 * f2) / det;
  const double F = (a11 * f2 - f1 * a21) / det;

  SteadyState st;
  st.flux = F;
  st.left_value.resize(layers);
  st.slope.resize(layers);
  double a = a1;
  for (int j = 1; j <= layers; ++j) {
    st.left_value[j - 1] = a;
    st.slope[j - 1] = F / problem.kappa(j);
    a += F * problem.width(j) / problem.kappa(j);
    if (j <= problem.num_interfaces() && problem.kind() == ContactKind::Imperfect)
      a += F / problem.contact_coeff(j);
  }
  return st;
}

}  // namespace layerheat
