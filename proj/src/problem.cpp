#include "layerheat/problem.hpp"

#include <algorithm>
#include <cmath>

namespace layerheat {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonIncreasingBreakpoints: return "NonIncreasingBreakpoints";
    case ErrorCode::NonPositiveSigma: return "NonPositiveSigma";
    case ErrorCode::ZeroContactCoefficient: return "ZeroContactCoefficient";
    case ErrorCode::DegenerateBoundaryRow: return "DegenerateBoundaryRow";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::WrongInterfaceKind: return "WrongInterfaceKind";
    case ErrorCode::OverflowAtArgument: return "OverflowAtArgument";
    case ErrorCode::SingularNode: return "SingularNode";
    case ErrorCode::TooManyOverflowNodes: return "TooManyOverflowNodes";
    case ErrorCode::NonPositiveTime: return "NonPositiveTime";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::TableHorizonTooSmall: return "TableHorizonTooSmall";
    case ErrorCode::UnsupportedSetup: return "UnsupportedSetup";
    case ErrorCode::NoSteadyState: return "NoSteadyState";
    case ErrorCode::SingularStep: return "SingularStep";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::ConfigParse: return "ConfigParse";
  }
  return "UnknownError";
}

namespace {

double eval_poly(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

double eval_poly_derivative(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t m = c.size(); m-- > 1;)
    v = v * x + static_cast<double>(m) * c[m];
  return v;
}

// Piecewise-linear interpolation; clamps outside the sample range.
double eval_sampled(const std::vector<std::pair<double, double>>& pts,
                    double x, bool derivative) {
  if (pts.empty()) return 0.0;
  if (pts.size() == 1) return derivative ? 0.0 : pts.front().second;
  auto it = std::upper_bound(
      pts.begin(), pts.end(), x,
      [](double v, const std::pair<double, double>& p) { return v < p.first; });
  if (it == pts.begin()) ++it;
  if (it == pts.end()) --it;
  const auto& [x1, v1] = *it;
  const auto& [x0, v0] = *(it - 1);
  double slope = (v1 - v0) / (x1 - x0);
  if (derivative) return slope;
  return v0 + slope * (std::clamp(x, pts.front().first, pts.back().first) - x0);
}

}  // namespace

double TimeSignal::value(double t) const {
  return std::visit(
      [t](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) return s.value;
        if constexpr (std::is_same_v<S, Polynomial>) return eval_poly(s.coeffs, t);
        if constexpr (std::is_same_v<S, Cosine>)
          return s.amplitude * std::cos(s.frequency * t);
        if constexpr (std::is_same_v<S, Sine>)
          return s.amplitude * std::sin(s.frequency * t);
        if constexpr (std::is_same_v<S, Exponential>)
          return s.amplitude * std::exp(s.rate * t);
        if constexpr (std::is_same_v<S, Sampled>)
          return eval_sampled(s.points, t, false);
      },
      data);
}

bool TimeSignal::is_zero() const {
  return std::visit(
      [](const auto& s) -> bool {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) return s.value == 0.0;
        if constexpr (std::is_same_v<S, Polynomial>)
          return std::all_of(s.coeffs.begin(), s.coeffs.end(),
                             [](double c) { return c == 0.0; });
        if constexpr (std::is_same_v<S, Cosine>) return s.amplitude == 0.0;
        if constexpr (std::is_same_v<S, Sine>) return s.amplitude == 0.0;
        if constexpr (std::is_same_v<S, Exponential>) return s.amplitude == 0.0;
        if constexpr (std::is_same_v<S, Sampled>)
          return std::all_of(s.points.begin(), s.points.end(),
                             [](const auto& p) { return p.second == 0.0; });
      },
      data);
}

double InitialCondition::value(double x) const {
  return std::visit(
      [x](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) return s.value;
        if constexpr (std::is_same_v<S, PolynomialInX>) return eval_poly(s.coeffs, x);
        if constexpr (std::is_same_v<S, Sampled>)
          return eval_sampled(s.points, x, false);
      },
      data);
}

double InitialCondition::derivative(double x) const {
  return std::visit(
      [x](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, Constant>) { (void)s; return 0.0; }
        if constexpr (std::is_same_v<S, PolynomialInX>)
          return eval_poly_derivative(s.coeffs, x);
        if constexpr (std::is_same_v<S, Sampled>)
          return eval_sampled(s.points, x, true);
      },
      data);
}

std::vector<Violation> check(const Problem& problem) {
  std::vector<Violation> out;
  const auto& bp = problem.layers.breakpoints;
  const auto& sg = problem.layers.sigmas;

  if (bp.size() < 2) {
    out.push_back({ErrorCode::LengthMismatch, "need at least two breakpoints"});
    return out;
  }
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    if (!(bp[i] < bp[i + 1])) {
      out.push_back({ErrorCode::NonIncreasingBreakpoints,
                     "breakpoints must be strictly increasing"});
      break;
    }
  }
  for (double s : sg) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      out.push_back({ErrorCode::NonPositiveSigma,
                     "sigma values must be positive and finite"});
      break;
    }
  }
  if (sg.size() != bp.size() - 1)
    out.push_back({ErrorCode::LengthMismatch,
                   "need exactly one sigma per layer"});
  if (problem.initial.size() != sg.size())
    out.push_back({ErrorCode::LengthMismatch,
                   "need exactly one initial condition per layer"});

  std::size_t n = bp.size() >= 2 ? bp.size() - 2 : 0;
  if (problem.interfaces.kind == ContactKind::Imperfect) {
    if (problem.interfaces.contact_coeffs.size() != n)
      out.push_back({ErrorCode::LengthMismatch,
                     "imperfect contact needs one H per interface"});
    for (double h : problem.interfaces.contact_coeffs)
      if (h == 0.0 || !std::isfinite(h)) {
        out.push_back({ErrorCode::ZeroContactCoefficient,
                       "contact transfer coefficients must be nonzero"});
        break;
      }
  } else if (!problem.interfaces.contact_coeffs.empty()) {
    out.push_back({ErrorCode::LengthMismatch,
                   "perfect contact takes no contact coefficients"});
  }

  const auto& b = problem.boundary;
  if (b.beta1 == 0.0 && b.beta2 == 0.0)
    out.push_back({ErrorCode::DegenerateBoundaryRow, "(beta1, beta2) = (0, 0)"});
  if (b.beta3 == 0.0 && b.beta4 == 0.0)
    out.push_back({ErrorCode::DegenerateBoundaryRow, "(beta3, beta4) = (0, 0)"});
  return out;
}

ValidatedProblem validate(const Problem& problem) {
  auto violations = check(problem);
  if (!violations.empty()) {
    std::string msg = violations.front().detail;
    if (violations.size() > 1)
      msg += " (+" + std::to_string(violations.size() - 1) + " more)";
    throw SolverError(violations.front().code, msg);
  }

  ValidatedProblem vp;
  vp.shift_ = problem.layers.breakpoints.front();
  vp.breakpoints_ = problem.layers.breakpoints;
  for (double& x : vp.breakpoints_) x -= vp.shift_;
  vp.breakpoints_.front() = 0.0;
  vp.sigmas_ = problem.layers.sigmas;
  vp.kind_ = problem.interfaces.kind;
  vp.contact_coeffs_ = problem.interfaces.contact_coeffs;
  vp.boundary_ = problem.boundary;
  vp.initial_ = problem.initial;
  return vp;
}

int ValidatedProblem::layer_of(double x) const {
  if (x < left() - 1e-12 || x > right() + 1e-12)
    throw SolverError(ErrorCode::OutOfDomain,
                      "x = " + std::to_string(x + shift_) + " outside the slab");
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  int idx = static_cast<int>(it - breakpoints_.begin());
  if (idx <= 0) return 1;
  return std::min(idx, num_layers());
}

double ValidatedProblem::initial_value(double x) const {
  // Initial conditions are stated in the original coordinate.
  return initial(layer_of(x)).value(x + shift_);
}

double ValidatedProblem::initial_flux(double x) const {
  int j = layer_of(x);
  return kappa(j) * initial(j).derivative(x + shift_);
}

ValidatedProblem ValidatedProblem::with_contact_coeffs(
    const std::vector<double>& h) const {
  if (kind_ == ContactKind::Perfect) return *this;
  if (h.size() != contact_coeffs_.size())
    throw SolverError(ErrorCode::LengthMismatch,
                      "contact coefficient count mismatch");
  ValidatedProblem vp = *this;
  vp.contact_coeffs_ = h;
  return vp;
}

}  // namespace layerheat
