#include "layerheat/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace layerheat {

using nlohmann::json;

namespace {

json signal_to_json(const TimeSignal& s) {
  return std::visit(
      [](const auto& v) -> json {
        using S = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<S, TimeSignal::Constant>)
          return {{"type", "constant"}, {"value", v.value}};
        else if constexpr (std::is_same_v<S, TimeSignal::Polynomial>)
          return {{"type", "polynomial"}, {"coeffs", v.coeffs}};
        else if constexpr (std::is_same_v<S, TimeSignal::Cosine>)
          return {{"type", "cosine"},
                  {"amplitude", v.amplitude},
                  {"frequency", v.frequency}};
        else if constexpr (std::is_same_v<S, TimeSignal::Sine>)
          return {{"type", "sine"},
                  {"amplitude", v.amplitude},
                  {"frequency", v.frequency}};
        else if constexpr (std::is_same_v<S, TimeSignal::Exponential>)
          return {{"type", "exponential"},
                  {"amplitude", v.amplitude},
                  {"rate", v.rate}};
        else
          return {{"type", "sampled"}, {"points", v.points}};
      },
      s.data);
}

TimeSignal signal_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") return TimeSignal::constant(j.at("value").get<double>());
  if (type == "polynomial")
    return TimeSignal::polynomial(j.at("coeffs").get<std::vector<double>>());
  if (type == "cosine")
    return TimeSignal::cosine(j.at("amplitude").get<double>(),
                              j.at("frequency").get<double>());
  if (type == "sine")
    return TimeSignal::sine(j.at("amplitude").get<double>(),
                            j.at("frequency").get<double>());
  if (type == "exponential")
    return TimeSignal::exponential(j.at("amplitude").get<double>(),
                                   j.at("rate").get<double>());
  if (type == "sampled")
    return TimeSignal::sampled(
        j.at("points").get<std::vector<std::pair<double, double>>>());
  throw SolverError(ErrorCode::ConfigParse, "unknown signal type " + type);
}

json initial_to_json(const InitialCondition& ic) {
  return std::visit(
      [](const auto& v) -> json {
        using S = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<S, InitialCondition::Constant>)
          return {{"type", "constant"}, {"value", v.value}};
        else if constexpr (std::is_same_v<S, InitialCondition::PolynomialInX>)
          return {{"type", "polynomial"}, {"coeffs", v.coeffs}};
        else
          return {{"type", "sampled"}, {"points", v.points}};
      },
      ic.data);
}

InitialCondition initial_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant")
    return InitialCondition::constant(j.at("value").get<double>());
  if (type == "polynomial")
    return InitialCondition::polynomial(j.at("coeffs").get<std::vector<double>>());
  if (type == "sampled")
    return InitialCondition::sampled(
        j.at("points").get<std::vector<std::pair<double, double>>>());
  throw SolverError(ErrorCode::ConfigParse, "unknown initial type " + type);
}

}  // namespace

Method method_from_string(const std::string& name) {
  if (name == "utm") return Method::Utm;
  if (name == "fd") return Method::Fd;
  if (name == "fourier") return Method::Fourier;
  throw SolverError(ErrorCode::ConfigParse, "unknown method " + name);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Utm: return "utm";
    case Method::Fd: return "fd";
    case Method::Fourier: return "fourier";
  }
  return "utm";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SolverError(ErrorCode::ConfigParse, e.what());
  }
  try {
    RunConfig cfg;
    const json& p = j.at("problem");
    cfg.problem.layers.breakpoints = p.at("breakpoints").get<std::vector<double>>();
    cfg.problem.layers.sigmas = p.at("sigmas").get<std::vector<double>>();
    const json& itf = p.at("interface");
    const std::string kind = itf.at("kind").get<std::string>();
    if (kind == "perfect") {
      cfg.problem.interfaces = InterfaceSpec::perfect();
    } else if (kind == "imperfect") {
      cfg.problem.interfaces =
          InterfaceSpec::imperfect(itf.at("H").get<std::vector<double>>());
    } else {
      throw SolverError(ErrorCode::ConfigParse, "unknown interface kind " + kind);
    }
    const json& bd = p.at("boundary");
    auto beta = bd.at("beta").get<std::vector<double>>();
    if (beta.size() != 4)
      throw SolverError(ErrorCode::ConfigParse, "boundary.beta needs 4 entries");
    cfg.problem.boundary.beta1 = beta[0];
    cfg.problem.boundary.beta2 = beta[1];
    cfg.problem.boundary.beta3 = beta[2];
    cfg.problem.boundary.beta4 = beta[3];
    cfg.problem.boundary.f_left = signal_from_json(bd.at("f_left"));
    cfg.problem.boundary.f_right = signal_from_json(bd.at("f_right"));
    for (const json& ic : p.at("initial"))
      cfg.problem.initial.push_back(initial_from_json(ic));

    if (j.contains("times")) cfg.times = j.at("times").get<std::vector<double>>();
    if (j.contains("grid")) cfg.grid = j.at("grid").get<int>();
    if (j.contains("method"))
      cfg.method = method_from_string(j.at("method").get<std::string>());
    if (j.contains("compare_to"))
      cfg.compare_to = method_from_string(j.at("compare_to").get<std::string>());
    if (j.contains("contour")) {
      const json& c = j.at("contour");
      if (c.contains("theta_max")) cfg.contour.theta_max = c.at("theta_max");
      if (c.contains("count")) cfg.contour.count = c.at("count");
      if (c.contains("radius_multiplier")) cfg.contour.radius = c.at("radius_multiplier");
      if (c.contains("fixed_T")) cfg.contour.fixed_T = c.at("fixed_T").get<double>();
      if (c.contains("raw_overflow")) cfg.contour.raw_overflow = c.at("raw_overflow");
    }
    if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
    if (j.contains("flux")) cfg.flux = j.at("flux").get<bool>();
    if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    if (j.contains("fourier_terms")) cfg.fourier_terms = j.at("fourier_terms");
    if (j.contains("fd_cells_per_layer"))
      cfg.fd_cells_per_layer = j.at("fd_cells_per_layer");
    if (j.contains("fd_dt")) cfg.fd_dt = j.at("fd_dt");

    for (double t : cfg.times)
      if (t < 0.0)
        throw SolverError(ErrorCode::ConfigParse, "times must be nonnegative");
    if (!std::is_sorted(cfg.times.begin(), cfg.times.end()))
      throw SolverError(ErrorCode::ConfigParse, "times must be sorted");
    if (cfg.grid < 3)
      throw SolverError(ErrorCode::ConfigParse, "grid must be at least 3");
    return cfg;
  } catch (const json::exception& e) {
    throw SolverError(ErrorCode::ConfigParse, e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw SolverError(ErrorCode::ConfigParse, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  json p;
  p["breakpoints"] = cfg.problem.layers.breakpoints;
  p["sigmas"] = cfg.problem.layers.sigmas;
  if (cfg.problem.interfaces.kind == ContactKind::Perfect)
    p["interface"] = {{"kind", "perfect"}};
  else
    p["interface"] = {{"kind", "imperfect"},
                      {"H", cfg.problem.interfaces.contact_coeffs}};
  p["boundary"] = {{"beta",
                    {cfg.problem.boundary.beta1, cfg.problem.boundary.beta2,
                     cfg.problem.boundary.beta3, cfg.problem.boundary.beta4}},
                   {"f_left", signal_to_json(cfg.problem.boundary.f_left)},
                   {"f_right", signal_to_json(cfg.problem.boundary.f_right)}};
  json ics = json::array();
  for (const auto& ic : cfg.problem.initial) ics.push_back(initial_to_json(ic));
  p["initial"] = ics;

  json j;
  j["problem"] = p;
  j["times"] = cfg.times;
  j["grid"] = cfg.grid;
  j["method"] = method_name(cfg.method);
  if (cfg.compare_to) j["compare_to"] = method_name(*cfg.compare_to);
  json c;
  c["theta_max"] = cfg.contour.theta_max;
  c["count"] = cfg.contour.count;
  c["radius_multiplier"] = cfg.contour.radius;
  if (cfg.contour.fixed_T) c["fixed_T"] = *cfg.contour.fixed_T;
  c["raw_overflow"] = cfg.contour.raw_overflow;
  j["contour"] = c;
  if (!cfg.output.empty()) j["output"] = cfg.output;
  j["flux"] = cfg.flux;
  j["threads"] = cfg.threads;
  j["fourier_terms"] = cfg.fourier_terms;
  j["fd_cells_per_layer"] = cfg.fd_cells_per_layer;
  j["fd_dt"] = cfg.fd_dt;
  return j.dump(2);
}

namespace {

Problem alternating_stack(int n, bool imperfect, double h) {
  Problem prob;
  const int layers = n + 1;
  for (int i = 0; i <= layers; ++i)
    prob.layers.breakpoints.push_back(static_cast<double>(i) / layers);
  for (int j = 1; j <= layers; ++j)
    prob.layers.sigmas.push_back(j % 2 == 1 ? 1.0 : std::sqrt(0.1));
  prob.interfaces = imperfect
                        ? InterfaceSpec::imperfect(std::vector<double>(n, h))
                        : InterfaceSpec::perfect();
  for (int j = 0; j < layers; ++j)
    prob.initial.push_back(InitialCondition::constant(0.0));
  return prob;
}

Problem sinusoid_stack(int n, bool imperfect, double h) {
  Problem prob;
  const int layers = n + 1;
  for (int i = 0; i <= layers; ++i)
    prob.layers.breakpoints.push_back(static_cast<double>(i) / layers);
  for (int j = 1; j <= layers; ++j)
    prob.layers.sigmas.push_back(std::sqrt(1.1 + std::sin(static_cast<double>(j))));
  prob.interfaces = imperfect
                        ? InterfaceSpec::imperfect(std::vector<double>(n, h))
                        : InterfaceSpec::perfect();
  return prob;
}

}  // namespace

RunConfig example_config(const std::string& name) {
  RunConfig cfg;
  if (name == "A" || name == "A0") {
    Problem prob;
    prob.layers.breakpoints = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    prob.layers.sigmas = {1.0, 1.0, 1.0};
    prob.interfaces = InterfaceSpec::perfect();
    prob.boundary.beta1 = 1.0;
    prob.boundary.beta2 = 0.0;
    prob.boundary.beta3 = 1.0;
    prob.boundary.beta4 = 0.0;
    prob.boundary.f_left = TimeSignal::constant(0.0);
    prob.boundary.f_right = TimeSignal::constant(name == "A" ? 1.0 : 0.0);
    for (int j = 0; j < 3; ++j)
      prob.initial.push_back(InitialCondition::polynomial({0.0, 0.0, 0.0, 1.0}));
    cfg.problem = prob;
    cfg.times = (name == "A") ? std::vector<double>{0.01, 0.1, 1.0}
                              : std::vector<double>{0.001, 0.01, 0.1};
    cfg.compare_to = Method::Fourier;
    if (name == "A0") {
      // Match the published runs of this setup, which solved only where
      // the raw exponential factors stay inside the double range and
      // interpolated the remaining tail.
      cfg.contour.theta_max = 10.0;
      cfg.contour.count = 2001;
      cfg.contour.raw_overflow = true;
    }
    return cfg;
  }
  if (name == "B" || name == "D") {
    Problem prob = alternating_stack(9, name == "D", 0.5);
    prob.boundary.beta1 = 1.0;
    prob.boundary.beta2 = 0.0;
    prob.boundary.f_left = TimeSignal::constant(1.0);
    prob.boundary.f_right = TimeSignal::constant(0.0);
    if (name == "B") {
      prob.boundary.beta3 = 1.0;
      prob.boundary.beta4 = 0.0;
    } else {  // Neumann right end
      prob.boundary.beta3 = 0.0;
      prob.boundary.beta4 = 1.0;
    }
    cfg.problem = prob;
    cfg.times = {0.02, 0.1, 0.5};
    cfg.compare_to = Method::Fd;
    return cfg;
  }
  if (name == "C") {
    Problem prob;
    prob.layers.breakpoints = {0.0, 0.25, 0.5, 0.75, 1.0};
    prob.layers.sigmas = {std::sqrt(0.2), std::sqrt(0.01), std::sqrt(0.1), 1.0};
    prob.interfaces = InterfaceSpec::perfect();
    prob.boundary.beta1 = 1.0;
    prob.boundary.beta2 = 0.0;
    prob.boundary.beta3 = 1.0;
    prob.boundary.beta4 = 1.0;
    prob.boundary.f_left = TimeSignal::cosine(1.0, 1.0);
    prob.boundary.f_right = TimeSignal::constant(0.0);
    for (int j = 0; j < 4; ++j)
      prob.initial.push_back(InitialCondition::constant(1.0));
    cfg.problem = prob;
    cfg.times = {0.1, 0.5, 3.0};
    return cfg;
  }
  if (name == "E" || name == "E19") {
    Problem prob = sinusoid_stack(name == "E" ? 199 : 19, false, 0.0);
    for (int j = 0; j < (name == "E" ? 200 : 20); ++j)
      prob.initial.push_back(InitialCondition::constant(1.0));
    prob.boundary.beta1 = 1.0;
    prob.boundary.beta2 = 0.0;
    prob.boundary.beta3 = 1.0;
    prob.boundary.beta4 = 0.0;
    prob.boundary.f_left = TimeSignal::constant(0.5);
    prob.boundary.f_right = TimeSignal::constant(0.0);
    cfg.problem = prob;
    cfg.times = {0.02, 0.1, 0.5};
    cfg.compare_to = Method::Fd;
    return cfg;
  }
  if (name == "F") {
    Problem prob = sinusoid_stack(199, true, 0.5);
    for (int j = 0; j < 200; ++j)
      prob.initial.push_back(InitialCondition::polynomial({0.0, 1.0}));
    prob.boundary.beta1 = 0.0;
    prob.boundary.beta2 = 1.0;  // u_x(0, t) = 0
    prob.boundary.beta3 = 1.0;
    prob.boundary.beta4 = 0.0;  // u(1, t) = 0
    prob.boundary.f_left = TimeSignal::constant(0.0);
    prob.boundary.f_right = TimeSignal::constant(0.0);
    cfg.problem = prob;
    cfg.times = {0.02, 0.1, 0.5};
    cfg.compare_to = Method::Fd;
    return cfg;
  }
  throw SolverError(ErrorCode::UnknownExample, "no example named " + name);
}

}  // namespace layerheat
