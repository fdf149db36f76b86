#include "layerheat/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "layerheat/transforms.hpp"

namespace layerheat {

namespace {

using Complex = std::complex<double>;

constexpr double kTwoPi = 2.0 * M_PI;

// Column of an unknown in the spectral vector; layer arguments are 1-based.
struct Columns {
  const ValidatedProblem* p;
  bool imperfect;
  int n;

  int g0(int j) const { return imperfect ? j : j - 1; }
  int g1(int j) const { return imperfect ? 0 : p->num_interfaces() + 1 + j; }
  int h0(int j) const {
    return imperfect ? p->num_interfaces() + 1 + j : p->num_interfaces() + 1;
  }
  int h1() const { return 2 * p->num_interfaces() + 3; }
};

Columns columns(const ValidatedProblem& p) {
  return {&p, p.kind() == ContactKind::Imperfect, p.num_interfaces()};
}

// Contour-integrand coefficient multiplying e^{i nu (x - x_j)/sigma_j} on
// the lower (minus) boundary for layer j, from the spectral row `x`.
Complex minus_coefficient(const ValidatedProblem& p, int j, Complex nu,
                          const ComplexMatrix& values, int row) {
  const Columns c = columns(p);
  const Complex i(0.0, 1.0);
  const double sj = p.sigma(j);
  const int n = p.num_interfaces();
  if (j == n + 1)
    return sj * values(row, c.h1()) + i * nu * values(row, c.h0(n + 1));
  if (p.kind() == ContactKind::Imperfect) {
    const double H = p.contact_coeff(j);
    return (H * values(row, c.g0(j + 1)) +
            (i * sj * nu - H) * values(row, c.h0(j))) / sj;
  }
  const double sj1 = p.sigma(j + 1);
  return (sj1 * sj1 / sj) * values(row, c.g1(j + 1)) +
         i * nu * values(row, c.g0(j + 1));
}

// Coefficient multiplying e^{i nu (x - x_{j-1})/sigma_j} on the upper
// (plus) boundary.
Complex plus_coefficient(const ValidatedProblem& p, int j, Complex nu,
                         const ComplexMatrix& values, int row) {
  const Columns c = columns(p);
  const Complex i(0.0, 1.0);
  const double sj = p.sigma(j);
  if (p.kind() == ContactKind::Imperfect) {
    if (j == 1)
      return sj * values(row, c.g1(1)) + i * nu * values(row, c.g0(1));
    const double H = p.contact_coeff(j - 1);
    return ((H + i * sj * nu) * values(row, c.g0(j)) -
            H * values(row, c.h0(j - 1))) / sj;
  }
  return sj * values(row, c.g1(j)) + i * nu * values(row, c.g0(j));
}

Complex compensation(Complex nu, double dt_scale) {
  if (dt_scale == 0.0) return {1.0, 0.0};
  Complex z = -nu * nu * dt_scale;
  if (z.real() > 700.0)
    throw SolverError(ErrorCode::OverflowAtArgument,
                      "scale-time compensation overflows; rebuild the table "
                      "with scale_time = t");
  if (z.real() < -745.0) return {0.0, 0.0};
  return std::exp(z);
}

struct InitialTermPlan {
  RealAxisGrid axis;
  std::vector<Complex> u0hat;  // per node
};

InitialTermPlan make_initial_plan(const ValidatedProblem& p, int layer, double t,
                                  double tol) {
  InitialTermPlan plan;
  plan.axis = real_axis_nodes(p.sigma(layer), t, tol, p.right() - p.left());
  plan.u0hat.resize(plan.axis.k.size());
  for (std::size_t i = 0; i < plan.axis.k.size(); ++i)
    plan.u0hat[i] = initial_transform(p, layer, Complex(plan.axis.k[i], 0.0));
  return plan;
}

// Real-axis term (and optionally its x-derivative) from a cached plan.
void initial_term_from_plan(const ValidatedProblem& p, const InitialTermPlan& plan,
                            int layer, double x, double t, Complex* value,
                            Complex* dvalue) {
  const double kappa = p.kappa(layer);
  Complex sum{0.0, 0.0}, dsum{0.0, 0.0};
  for (std::size_t i = 0; i < plan.axis.k.size(); ++i) {
    const double k = plan.axis.k[i];
    const Complex ikx(0.0, k * x);
    Complex term = std::exp(ikx - Complex(kappa * k * k * t, 0.0)) *
                   plan.u0hat[i] * plan.axis.weight[i];
    sum += term;
    if (dvalue) dsum += Complex(0.0, k) * term;
  }
  if (value) *value = sum / kTwoPi;
  if (dvalue) *dvalue = dsum / kTwoPi;
}

struct RawPoint {
  Complex u;
  Complex du;  // u_x, filled when requested
};

// Shared implementation for evaluate_solution / evaluate_flux; x is in the
// shifted coordinate.
RawPoint evaluate_raw(const ValidatedProblem& p, const SpectralTable& plus,
                      const SpectralTable& minus, double x, double t, int layer,
                      bool want_derivative, const InitialTermPlan* plan) {
  if (t > plus.horizon + 1e-12 || t > minus.horizon + 1e-12)
    throw SolverError(ErrorCode::TableHorizonTooSmall,
                      "evaluation time exceeds the table horizon");
  const double sj = p.sigma(layer);
  const double xl = p.breakpoint(layer - 1);
  const double xr = p.breakpoint(layer);
  const Complex i(0.0, 1.0);

  RawPoint out{{0.0, 0.0}, {0.0, 0.0}};
  InitialTermPlan local;
  if (!plan) {
    local = make_initial_plan(p, layer, t, 1e-16);
    plan = &local;
  }
  Complex dinit{0.0, 0.0};
  initial_term_from_plan(p, *plan, layer, x, t, &out.u,
                         want_derivative ? &dinit : nullptr);
  out.du = dinit;

  const double dts_minus = t - minus.scale_time;
  const double dts_plus = t - plus.scale_time;
  Complex sum_minus{0.0, 0.0}, dsum_minus{0.0, 0.0};
  for (int q = 0; q < minus.grid.count(); ++q) {
    const Complex nu = minus.grid.nu[q];
    Complex f = std::exp(i * nu * (x - xr) / sj) *
                minus_coefficient(p, layer, nu, minus.values, q) *
                compensation(nu, dts_minus) * minus.grid.weight[q];
    sum_minus += f;
    if (want_derivative) dsum_minus += i * nu / sj * f;
  }
  Complex sum_plus{0.0, 0.0}, dsum_plus{0.0, 0.0};
  for (int q = 0; q < plus.grid.count(); ++q) {
    const Complex nu = plus.grid.nu[q];
    Complex f = std::exp(i * nu * (x - xl) / sj) *
                plus_coefficient(p, layer, nu, plus.values, q) *
                compensation(nu, dts_plus) * plus.grid.weight[q];
    sum_plus += f;
    if (want_derivative) dsum_plus += i * nu / sj * f;
  }
  out.u -= (sum_minus + sum_plus) / kTwoPi;
  out.du -= (dsum_minus + dsum_plus) / kTwoPi;
  return out;
}

int pick_layer(const ValidatedProblem& p, double x, std::optional<int> layer) {
  if (layer) {
    if (*layer < 1 || *layer > p.num_layers())
      throw SolverError(ErrorCode::OutOfDomain, "layer index out of range");
    return *layer;
  }
  return p.layer_of(x);
}

}  // namespace

double evaluate_initial_term(const ValidatedProblem& problem, int layer,
                             double x, double t, double tol) {
  if (t <= 0.0)
    throw SolverError(ErrorCode::NonPositiveTime,
                      "initial term needs t > 0; t = 0 returns u0 directly");
  auto plan = make_initial_plan(problem, layer, t, tol);
  Complex value;
  initial_term_from_plan(problem, plan, layer, x, t, &value, nullptr);
  return value.real();
}

PointValue evaluate_solution(const ValidatedProblem& problem,
                             const SpectralTable& plus,
                             const SpectralTable& minus, double x, double t,
                             std::optional<int> layer) {
  const int j = pick_layer(problem, x, layer);
  if (t == 0.0) return {problem.initial_value(x), 0.0};
  RawPoint raw = evaluate_raw(problem, plus, minus, x, t, j, false, nullptr);
  return {raw.u.real(), std::abs(raw.u.imag())};
}

PointValue evaluate_flux(const ValidatedProblem& problem,
                         const SpectralTable& plus, const SpectralTable& minus,
                         double x, double t, std::optional<int> layer) {
  const int j = pick_layer(problem, x, layer);
  if (t == 0.0) return {problem.initial_flux(x), 0.0};
  RawPoint raw = evaluate_raw(problem, plus, minus, x, t, j, true, nullptr);
  const double kappa = problem.kappa(j);
  return {kappa * raw.du.real(), std::abs(kappa * raw.du.imag())};
}

std::pair<std::vector<double>, std::vector<int>> standard_grid(
    const ValidatedProblem& problem, int points, bool include_breakpoints) {
  std::vector<double> xs;
  std::vector<int> layers;
  const double L = problem.right();
  const double eps = 1e-12 * std::max(1.0, L);
  for (int i = 0; i < points; ++i) {
    double x = L * static_cast<double>(i) / static_cast<double>(points - 1);
    bool is_break = false;
    for (int j = 1; j <= problem.num_interfaces(); ++j)
      if (std::abs(x - problem.breakpoint(j)) < eps) {
        is_break = true;
        x = problem.breakpoint(j);
      }
    if (is_break) {
      xs.push_back(x);
      layers.push_back(problem.layer_of(x));  // left side
      xs.push_back(x);
      layers.push_back(problem.layer_of(x) + 1);
    } else {
      xs.push_back(x);
      layers.push_back(problem.layer_of(x));
    }
  }
  if (include_breakpoints) {
    for (int j = 1; j <= problem.num_interfaces(); ++j) {
      double xb = problem.breakpoint(j);
      bool present = false;
      for (double x : xs)
        if (std::abs(x - xb) < eps) present = true;
      if (!present) {
        xs.push_back(xb);
        layers.push_back(j);
        xs.push_back(xb);
        layers.push_back(j + 1);
      }
    }
    // Re-sort by x, keeping left-side rows ahead of right-side rows.
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (xs[a] != xs[b]) return xs[a] < xs[b];
      return layers[a] < layers[b];
    });
    std::vector<double> xs2(xs.size());
    std::vector<int> ly2(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      xs2[i] = xs[order[i]];
      ly2[i] = layers[order[i]];
    }
    xs.swap(xs2);
    layers.swap(ly2);
  }
  return {std::move(xs), std::move(layers)};
}

int SolutionField::find_point(double x, int layer_tag) const {
  for (std::size_t i = 0; i < grid_x.size(); ++i)
    if (std::abs(grid_x[i] - x) < 1e-12 && layer[i] == layer_tag)
      return static_cast<int>(i);
  return -1;
}

SolutionField evaluate_field(const ValidatedProblem& problem,
                             const std::vector<double>& times,
                             const FieldOptions& options) {
  SolutionField field;
  auto [xs, layers] = standard_grid(problem, options.grid_points,
                                    options.include_breakpoints);
  field.layer = layers;
  field.times = times;
  field.grid_x.resize(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    field.grid_x[i] = xs[i] + problem.shift();

  const bool nonhomogeneous =
      !problem.boundary().f_left.is_zero() || !problem.boundary().f_right.is_zero();

  for (double t : times) {
    std::vector<double> row(xs.size(), 0.0);
    std::vector<double> frow(options.with_flux ? xs.size() : 0, 0.0);
    if (t < 0.0)
      throw SolverError(ErrorCode::NonPositiveTime, "negative output time");
    if (t == 0.0) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        row[i] = problem.initial(layers[i]).value(xs[i] + problem.shift());
        if (options.with_flux)
          frow[i] = problem.kappa(layers[i]) *
                    problem.initial(layers[i]).derivative(xs[i] + problem.shift());
      }
    } else {
      const double T = options.fixed_horizon.value_or(t);
      if (t > T)
        throw SolverError(ErrorCode::TableHorizonTooSmall,
                          "fixed_T below an output time");
      auto plus = contour_nodes(ContourHalf::Plus, options.theta_max,
                                options.contour_count, options.radius);
      auto minus = contour_nodes(ContourHalf::Minus, options.theta_max,
                                 options.contour_count, options.radius);
      TableOptions topt;
      topt.scale_time = t;
      topt.threads = options.threads;
      topt.raw_overflow = options.raw_overflow;
      SpectralTable tplus = build_spectral_table(problem, plus, T, topt);
      SpectralTable tminus = build_spectral_table(problem, minus, T, topt);
      field.max_solve_residual = std::max(
          {field.max_solve_residual, tplus.max_residual(), tminus.max_residual()});
      field.interpolated_fraction =
          std::max({field.interpolated_fraction, tplus.interpolated_fraction(),
                    tminus.interpolated_fraction()});

      std::vector<InitialTermPlan> plans(problem.num_layers() + 1);
      for (int j = 1; j <= problem.num_layers(); ++j)
        plans[j] = make_initial_plan(problem, j, t, options.axis_tol);

      double max_im = 0.0;
      auto eval_range = [&](std::size_t begin, std::size_t end, double* im_out) {
        double im = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
          RawPoint raw = evaluate_raw(problem, tplus, tminus, xs[i], t, layers[i],
                                      options.with_flux, &plans[layers[i]]);
          row[i] = raw.u.real();
          im = std::max(im, std::abs(raw.u.imag()));
          if (options.with_flux)
            frow[i] = problem.kappa(layers[i]) * raw.du.real();
        }
        *im_out = im;
      };
      const int threads = std::max(1, options.threads);
      if (threads == 1 || xs.size() < 2 * static_cast<std::size_t>(threads)) {
        eval_range(0, xs.size(), &max_im);
      } else {
        std::vector<std::thread> pool;
        std::vector<double> ims(threads, 0.0);
        std::size_t chunk = (xs.size() + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
          std::size_t begin = w * chunk;
          std::size_t end = std::min(xs.size(), begin + chunk);
          if (begin < end) pool.emplace_back(eval_range, begin, end, &ims[w]);
        }
        for (auto& th : pool) th.join();
        max_im = *std::max_element(ims.begin(), ims.end());
      }
      field.max_imag_residue = std::max(field.max_imag_residue, max_im);
    }
    field.values.push_back(std::move(row));
    if (options.with_flux) field.flux.push_back(std::move(frow));
  }

  if (nonhomogeneous) {
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (xs[i] == 0.0 || xs[i] == problem.right()) field.endpoint_caveat = true;
  }
  return field;
}

}  // namespace layerheat
