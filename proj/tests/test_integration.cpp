#include <doctest.h>

#include <cmath>

#include "layerheat/config.hpp"
#include "layerheat/oracles.hpp"

using namespace layerheat;

namespace {

// Example F scaled down: imperfect contact, insulated left end, linear
// initial data.
Problem reduced_f(int n) {
  Problem p;
  const int layers = n + 1;
  for (int i = 0; i <= layers; ++i)
    p.layers.breakpoints.push_back(static_cast<double>(i) / layers);
  for (int j = 1; j <= layers; ++j)
    p.layers.sigmas.push_back(std::sqrt(1.1 + std::sin(static_cast<double>(j))));
  p.interfaces = InterfaceSpec::imperfect(std::vector<double>(n, 0.5));
  p.boundary = {0.0, 1.0, 1.0, 0.0, TimeSignal::constant(0.0),
                TimeSignal::constant(0.0)};
  for (int j = 0; j < layers; ++j)
    p.initial.push_back(InitialCondition::polynomial({0.0, 1.0}));
  return p;
}

}  // namespace

TEST_CASE("reduced example F matches the fd oracle") {
  ValidatedProblem vp = validate(reduced_f(9));
  double t = 0.1;
  FieldOptions opts;
  opts.grid_points = 81;
  auto utm = evaluate_field(vp, {t}, opts);
  CrankNicolson cn(vp, 200, 1e-4);
  auto fd = cn.field({t}, 81, true);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < utm.grid_x.size(); ++i) {
    num = std::max(num, std::abs(utm.values[0][i] - fd.values[0][i]));
    den = std::max(den, std::abs(utm.values[0][i]));
  }
  CHECK(num / den < 1e-3);
}

TEST_CASE("threaded field evaluation is deterministic") {
  RunConfig cfg = example_config("B");
  ValidatedProblem vp = validate(cfg.problem);
  FieldOptions serial, parallel;
  serial.grid_points = parallel.grid_points = 41;
  serial.contour_count = parallel.contour_count = 801;
  serial.theta_max = parallel.theta_max = 10.0;
  parallel.threads = 4;
  auto a = evaluate_field(vp, {0.1}, serial);
  auto b = evaluate_field(vp, {0.1}, parallel);
  for (std::size_t i = 0; i < a.values[0].size(); ++i)
    CHECK(a.values[0][i] == b.values[0][i]);
}

TEST_CASE("radius multiplier leaves the solution unchanged") {
  RunConfig cfg = example_config("A");
  ValidatedProblem vp = validate(cfg.problem);
  FieldOptions base, scaled;
  base.grid_points = scaled.grid_points = 41;
  base.contour_count = scaled.contour_count = 1601;
  scaled.radius = 1.3;
  auto a = evaluate_field(vp, {0.1}, base);
  auto b = evaluate_field(vp, {0.1}, scaled);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < a.values[0].size(); ++i)
    worst = std::max(worst, std::abs(a.values[0][i] - b.values[0][i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("example C matches the fd oracle under the cosine drive") {
  RunConfig cfg = example_config("C");
  ValidatedProblem vp = validate(cfg.problem);
  double t = 0.5;
  FieldOptions opts;
  opts.grid_points = 81;
  auto utm = evaluate_field(vp, {t}, opts);
  CrankNicolson cn(vp, 200, 1e-4);
  auto fd = cn.field({t}, 81, true);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i + 1 < utm.grid_x.size(); ++i) {
    num = std::max(num, std::abs(utm.values[0][i] - fd.values[0][i]));
    den = std::max(den, std::abs(utm.values[0][i]));
  }
  CHECK(num / den < 1e-3);
}

TEST_CASE("example C field metadata reports clean solves") {
  RunConfig cfg = example_config("C");
  ValidatedProblem vp = validate(cfg.problem);
  FieldOptions opts;
  opts.grid_points = 41;
  auto field = evaluate_field(vp, {0.5}, opts);
  CHECK(field.max_solve_residual <= 1e-10);
  CHECK(field.interpolated_fraction == 0.0);
  CHECK(field.max_imag_residue <= 1e-8);
  CHECK(field.endpoint_caveat);  // cosine drive is nonhomogeneous
}
