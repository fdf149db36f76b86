#include "layerheat/runner.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace layerheat {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int exit_code_for(const SolverError& err) {
  switch (err.code()) {
    case ErrorCode::ConfigParse:
    case ErrorCode::UnknownExample:
      return kExitConfig;
    case ErrorCode::NonIncreasingBreakpoints:
    case ErrorCode::NonPositiveSigma:
    case ErrorCode::ZeroContactCoefficient:
    case ErrorCode::DegenerateBoundaryRow:
    case ErrorCode::LengthMismatch:
      return kExitValidation;
    default:
      return kExitNumerical;
  }
}

bool nonhomogeneous(const Problem& p) {
  return !p.boundary.f_left.is_zero() || !p.boundary.f_right.is_zero();
}

}  // namespace

SolutionField compute_field(const RunConfig& config, Method method) {
  ValidatedProblem vp = validate(config.problem);
  switch (method) {
    case Method::Utm: {
      FieldOptions opts;
      opts.grid_points = config.grid;
      opts.include_breakpoints = false;
      opts.with_flux = config.flux;
      opts.theta_max = config.contour.theta_max;
      opts.contour_count = config.contour.count;
      opts.radius = config.contour.radius;
      opts.fixed_horizon = config.contour.fixed_T;
      opts.threads = config.threads;
      opts.raw_overflow = config.contour.raw_overflow;
      return evaluate_field(vp, config.times, opts);
    }
    case Method::Fd: {
      CrankNicolson cn(vp, config.fd_cells_per_layer, config.fd_dt);
      return cn.field(config.times, config.grid, false);
    }
    case Method::Fourier:
      return fourier_series_field(vp, config.times, config.grid, false,
                                  config.fourier_terms);
  }
  throw SolverError(ErrorCode::ConfigParse, "unreachable method");
}

void write_field_csv(std::ostream& out, const SolutionField& field,
                     const RunConfig& config, Method method) {
  out << "# method=" << method_name(method) << "\n";
  out << "# contour_theta_max=" << fmt17(config.contour.theta_max)
      << " contour_count=" << config.contour.count
      << " radius_multiplier=" << fmt17(config.contour.radius);
  if (config.contour.fixed_T) out << " fixed_T=" << fmt17(*config.contour.fixed_T);
  out << "\n";
  out << "# max_solve_residual=" << fmt17(field.max_solve_residual)
      << " interpolated_fraction=" << fmt17(field.interpolated_fraction)
      << " max_imag_residue=" << fmt17(field.max_imag_residue) << "\n";
  out << "# endpoint_caveat=" << (field.endpoint_caveat ? "true" : "false")
      << "\n";
  out << "x,t,layer,u" << (field.flux.empty() ? "" : ",flux") << "\n";
  for (std::size_t ti = 0; ti < field.times.size(); ++ti)
    for (std::size_t i = 0; i < field.grid_x.size(); ++i) {
      out << fmt17(field.grid_x[i]) << "," << fmt17(field.times[ti]) << ","
          << field.layer[i] << "," << fmt17(field.values[ti][i]);
      if (!field.flux.empty()) out << "," << fmt17(field.flux[ti][i]);
      out << "\n";
    }
}

int run_solve(const RunConfig& config, std::ostream& log, std::ostream& err) {
  try {
    SolutionField field = compute_field(config, config.method);
    if (!config.output.empty()) {
      std::ofstream out(config.output);
      if (!out) {
        err << "cannot open output file " << config.output << "\n";
        return kExitConfig;
      }
      write_field_csv(out, field, config, config.method);
      log << "wrote " << config.output << " ("
          << field.times.size() * field.grid_x.size() << " data rows)\n";
    } else {
      write_field_csv(log, field, config, config.method);
    }
    return kExitOk;
  } catch (const SolverError& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  }
}

int run_compare(const RunConfig& config, std::ostream& log, std::ostream& err,
                CompareResult* result) {
  try {
    if (!config.compare_to)
      throw SolverError(ErrorCode::ConfigParse, "compare needs compare_to");
    SolutionField primary = compute_field(config, config.method);
    SolutionField reference = compute_field(config, *config.compare_to);
    const bool exclude = nonhomogeneous(config.problem);

    std::ofstream file;
    if (!config.output.empty()) {
      file.open(config.output);
      if (!file) {
        err << "cannot open output file " << config.output << "\n";
        return kExitConfig;
      }
      file << "# " << method_name(config.method) << " vs "
           << method_name(*config.compare_to)
           << " exclude_endpoints=" << (exclude ? "true" : "false") << "\n";
      file << "t,E,grid,excluded_endpoints\n";
    }
    for (double t : config.times) {
      ErrorReport rep = relative_error(primary, reference, t, exclude);
      log << "t=" << fmt17(t) << " E=" << fmt17(rep.error)
          << " grid=" << rep.grid_size
          << " exclude_endpoints=" << (exclude ? "true" : "false") << "\n";
      if (file.is_open())
        file << fmt17(t) << "," << fmt17(rep.error) << "," << rep.grid_size << ","
             << (exclude ? "true" : "false") << "\n";
      if (result) result->reports.push_back(rep);
    }
    return kExitOk;
  } catch (const SolverError& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  }
}

int run_example(const std::string& name, const ConfigPatch& patch,
                std::ostream& log, std::ostream& err) {
  try {
    RunConfig cfg = example_config(name);
    if (patch.times) cfg.times = *patch.times;
    if (patch.grid) cfg.grid = *patch.grid;
    if (patch.theta_max) cfg.contour.theta_max = *patch.theta_max;
    if (patch.contour_count) cfg.contour.count = *patch.contour_count;
    if (patch.fixed_T) cfg.contour.fixed_T = *patch.fixed_T;
    if (patch.output) cfg.output = *patch.output;
    if (patch.threads) cfg.threads = *patch.threads;
    if (patch.compare_to) cfg.compare_to = *patch.compare_to;
    if (cfg.output.empty()) cfg.output = "example_" + name + ".csv";
    int code = run_solve(cfg, log, err);
    if (code != kExitOk) return code;
    if (cfg.compare_to) {
      RunConfig cmp = cfg;
      cmp.output = "example_" + name + "_error.csv";
      return run_compare(cmp, log, err);
    }
    return kExitOk;
  } catch (const SolverError& e) {
    err << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace layerheat
