#include <doctest.h>

#include <fstream>
#include <sstream>

#include "layerheat/runner.hpp"

using namespace layerheat;

TEST_CASE("config round-trips through JSON") {
  RunConfig cfg = example_config("D");
  cfg.contour.fixed_T = 0.7;
  cfg.output = "out.csv";
  std::string text = serialize_config(cfg);
  RunConfig back = parse_config(text);
  CHECK(back.problem.layers.breakpoints == cfg.problem.layers.breakpoints);
  CHECK(back.problem.layers.sigmas == cfg.problem.layers.sigmas);
  CHECK(back.problem.interfaces.kind == cfg.problem.interfaces.kind);
  CHECK(back.problem.interfaces.contact_coeffs ==
        cfg.problem.interfaces.contact_coeffs);
  CHECK(back.problem.boundary.beta3 == cfg.problem.boundary.beta3);
  CHECK(back.times == cfg.times);
  CHECK(back.grid == cfg.grid);
  CHECK(back.compare_to == cfg.compare_to);
  CHECK(back.contour.theta_max == cfg.contour.theta_max);
  CHECK(back.contour.fixed_T == cfg.contour.fixed_T);
  // The validated problems agree too.
  auto v1 = validate(cfg.problem);
  auto v2 = validate(back.problem);
  for (int i = 0; i <= v1.num_interfaces() + 1; ++i)
    CHECK(v1.breakpoint(i) == v2.breakpoint(i));
}

TEST_CASE("malformed config raises ConfigParse") {
  CHECK_THROWS_AS(parse_config("{ not json"), SolverError);
  CHECK_THROWS_AS(parse_config("{}"), SolverError);
  CHECK_THROWS_AS(parse_config(R"({"problem": {"breakpoints": [0, 1]}})"),
                  SolverError);
}

TEST_CASE("unknown example raises") {
  CHECK_THROWS_AS(example_config("Z"), SolverError);
}

TEST_CASE("built-in examples match their stated parameters") {
  auto a = example_config("A");
  CHECK(a.problem.layers.breakpoints.size() == 4);
  CHECK(a.problem.boundary.f_right.value(0.3) == 1.0);
  auto a0 = example_config("A0");
  CHECK(a0.problem.boundary.f_right.is_zero());
  auto b = example_config("B");
  CHECK(b.problem.layers.sigmas.size() == 10);
  CHECK(b.problem.layers.sigmas[1] == doctest::Approx(std::sqrt(0.1)));
  CHECK(b.problem.interfaces.kind == ContactKind::Perfect);
  auto c = example_config("C");
  CHECK(c.problem.layers.sigmas[1] == doctest::Approx(0.1));
  CHECK(c.problem.boundary.beta4 == 1.0);
  CHECK(!c.compare_to.has_value());
  auto d = example_config("D");
  CHECK(d.problem.interfaces.contact_coeffs ==
        std::vector<double>(9, 0.5));
  CHECK(d.problem.boundary.beta3 == 0.0);
  CHECK(d.problem.boundary.beta4 == 1.0);
  auto e = example_config("E");
  CHECK(e.problem.layers.sigmas.size() == 200);
  CHECK(e.problem.layers.sigmas[0] == doctest::Approx(std::sqrt(1.1 + std::sin(1.0))));
  auto f = example_config("F");
  CHECK(f.problem.interfaces.kind == ContactKind::Imperfect);
  CHECK(f.problem.boundary.beta2 == 1.0);
}

TEST_CASE("run_solve writes a deterministic data file with metadata") {
  RunConfig cfg = example_config("A");
  cfg.times = {0.1};
  cfg.grid = 21;
  cfg.contour.count = 801;
  cfg.contour.theta_max = 10.0;
  cfg.output = "solve_test_a.csv";
  std::ostringstream log1, err1;
  REQUIRE(run_solve(cfg, log1, err1) == kExitOk);
  std::ifstream in1(cfg.output);
  std::stringstream s1;
  s1 << in1.rdbuf();

  cfg.output = "solve_test_b.csv";
  std::ostringstream log2, err2;
  REQUIRE(run_solve(cfg, log2, err2) == kExitOk);
  std::ifstream in2(cfg.output);
  std::stringstream s2;
  s2 << in2.rdbuf();
  CHECK(s1.str() == s2.str());  // byte-identical

  // Row count: header lines + grid rows per time.
  int data_rows = 0;
  bool header_seen = false;
  std::string line;
  std::stringstream s3(s1.str());
  while (std::getline(s3, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (!header_seen) {
      header_seen = true;
      CHECK(line == "x,t,layer,u");
      continue;
    }
    ++data_rows;
  }
  CHECK(data_rows == 21);
  std::remove("solve_test_a.csv");
  std::remove("solve_test_b.csv");
}

TEST_CASE("self-comparison gives E = 0 and exit 0") {
  RunConfig cfg = example_config("A");
  cfg.times = {0.1};
  cfg.grid = 15;
  cfg.contour.count = 801;
  cfg.contour.theta_max = 10.0;
  cfg.method = Method::Fourier;
  cfg.compare_to = Method::Fourier;
  std::ostringstream log, err;
  CompareResult result;
  REQUIRE(run_compare(cfg, log, err, &result) == kExitOk);
  REQUIRE(result.reports.size() == 1);
  CHECK(result.reports[0].error == 0.0);
}

TEST_CASE("run_example dispatches solve and compare with data files") {
  ConfigPatch patch;
  patch.times = std::vector<double>{0.1};
  patch.grid = 15;
  patch.contour_count = 801;
  patch.theta_max = 10.0;
  patch.output = std::string("example_disp.csv");
  std::ostringstream log, err;
  REQUIRE(run_example("A", patch, log, err) == kExitOk);
  std::ifstream data("example_disp.csv");
  CHECK(data.good());
  std::ifstream errors("example_A_error.csv");
  CHECK(errors.good());
  std::remove("example_disp.csv");
  std::remove("example_A_error.csv");
  std::ostringstream log2, err2;
  CHECK(run_example("Z", {}, log2, err2) == kExitConfig);
}

TEST_CASE("exit codes: parse, validation, numerical") {
  std::ostringstream log, err;
  // Validation failure.
  RunConfig bad = example_config("A");
  bad.problem.layers.sigmas[0] = -1.0;
  CHECK(run_solve(bad, log, err) == kExitValidation);
  // Numerical failure: fourier oracle on a non-fourier problem.
  RunConfig mism = example_config("D");
  mism.times = {0.05};
  mism.grid = 11;
  mism.method = Method::Fourier;
  CHECK(run_solve(mism, log, err) == kExitNumerical);
}
