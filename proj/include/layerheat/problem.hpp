#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "layerheat/errors.hpp"

namespace layerheat {

/// Time-dependent boundary data f(t). Restricted to classes whose
/// exponential-weighted integrals have closed forms, plus a sampled
/// fallback integrated exactly under piecewise-linear reconstruction.
struct TimeSignal {
  struct Constant {
    double value = 0.0;
  };
  struct Polynomial {
    std::vector<double> coeffs;  // c0 + c1 t + c2 t^2 + ...
  };
  struct Cosine {
    double amplitude = 1.0;
    double frequency = 1.0;
  };
  struct Sine {
    double amplitude = 1.0;
    double frequency = 1.0;
  };
  struct Exponential {
    double amplitude = 1.0;
    double rate = 0.0;
  };
  struct Sampled {
    std::vector<std::pair<double, double>> points;  // (t, value), t increasing
  };

  std::variant<Constant, Polynomial, Cosine, Sine, Exponential, Sampled> data =
      Constant{};

  static TimeSignal constant(double c) { return {Constant{c}}; }
  static TimeSignal polynomial(std::vector<double> c) {
    return {Polynomial{std::move(c)}};
  }
  static TimeSignal cosine(double a, double w) { return {Cosine{a, w}}; }
  static TimeSignal sine(double a, double w) { return {Sine{a, w}}; }
  static TimeSignal exponential(double a, double r) {
    return {Exponential{a, r}};
  }
  static TimeSignal sampled(std::vector<std::pair<double, double>> pts) {
    return {Sampled{std::move(pts)}};
  }

  double value(double t) const;
  bool is_zero() const;
};

/// Initial temperature of one layer, in the original (unshifted) coordinate.
struct InitialCondition {
  struct Constant {
    double value = 0.0;
  };
  struct PolynomialInX {
    std::vector<double> coeffs;  // c0 + c1 x + ...
  };
  struct Sampled {
    std::vector<std::pair<double, double>> points;  // (x, value), x increasing
  };

  std::variant<Constant, PolynomialInX, Sampled> data = Constant{};

  static InitialCondition constant(double c) { return {Constant{c}}; }
  static InitialCondition polynomial(std::vector<double> c) {
    return {PolynomialInX{std::move(c)}};
  }
  static InitialCondition sampled(std::vector<std::pair<double, double>> pts) {
    return {Sampled{std::move(pts)}};
  }

  double value(double x) const;
  double derivative(double x) const;
};

struct LayerStack {
  std::vector<double> breakpoints;  // x0 < x1 < ... < x_{n+1}
  std::vector<double> sigmas;       // sigma_j = sqrt(kappa_j), one per layer
};

enum class ContactKind { Perfect, Imperfect };

struct InterfaceSpec {
  ContactKind kind = ContactKind::Perfect;
  std::vector<double> contact_coeffs;  // H_j, j = 1..n, imperfect only

  static InterfaceSpec perfect() { return {ContactKind::Perfect, {}}; }
  static InterfaceSpec imperfect(std::vector<double> h) {
    return {ContactKind::Imperfect, std::move(h)};
  }
};

/// Robin data: beta1 u + beta2 u_x = f_left at x0,
///             beta3 u + beta4 u_x = f_right at x_{n+1}.
struct BoundarySpec {
  double beta1 = 1.0, beta2 = 0.0, beta3 = 1.0, beta4 = 0.0;
  TimeSignal f_left;
  TimeSignal f_right;
};

struct Problem {
  LayerStack layers;
  InterfaceSpec interfaces;
  BoundarySpec boundary;
  std::vector<InitialCondition> initial;  // one per layer
};

struct Violation {
  ErrorCode code;
  std::string detail;
};

/// Normalized, immutable problem. Breakpoints are shifted so the left end
/// sits at 0; the shift is kept so reports can use original coordinates.
/// Safe to share read-only across workers.
class ValidatedProblem {
public:
  // Number of interfaces n (layers = n + 1).
  int num_interfaces() const { return static_cast<int>(sigmas_.size()) - 1; }
  int num_layers() const { return static_cast<int>(sigmas_.size()); }
  int system_size() const { return 2 * num_interfaces() + 4; }

  ContactKind kind() const { return kind_; }
  double shift() const { return shift_; }

  // Shifted coordinates: breakpoint(0) == 0.
  double breakpoint(int i) const { return breakpoints_[i]; }
  double left() const { return breakpoints_.front(); }
  double right() const { return breakpoints_.back(); }
  double width(int layer) const {
    return breakpoints_[layer] - breakpoints_[layer - 1];
  }

  // Layers are 1-based (1..n+1), matching the usual interface numbering;
  // contact coefficient j couples layers j and j+1 at breakpoint j.
  double sigma(int layer) const { return sigmas_[layer - 1]; }
  double kappa(int layer) const { return sigmas_[layer - 1] * sigmas_[layer - 1]; }
  double contact_coeff(int j) const { return contact_coeffs_[j - 1]; }

  const BoundarySpec& boundary() const { return boundary_; }
  const InitialCondition& initial(int layer) const {
    return initial_[layer - 1];
  }

  /// Layer containing x (shifted coordinate); at an interior breakpoint the
  /// left layer is returned. x outside the domain throws OutOfDomain.
  int layer_of(double x) const;

  double initial_value(double x) const;           // u0(x), shifted coordinate
  double initial_flux(double x) const;            // sigma^2 u0'(x)

  /// Problem with every contact coefficient replaced (testing aid for the
  /// H -> infinity limit); perfect problems are returned unchanged.
  ValidatedProblem with_contact_coeffs(const std::vector<double>& h) const;

  friend ValidatedProblem validate(const Problem& problem);

private:
  ValidatedProblem() = default;

  std::vector<double> breakpoints_;
  std::vector<double> sigmas_;
  std::vector<double> contact_coeffs_;
  ContactKind kind_ = ContactKind::Perfect;
  BoundarySpec boundary_;
  std::vector<InitialCondition> initial_;
  double shift_ = 0.0;
};

/// All violations in `problem`, empty when valid.
std::vector<Violation> check(const Problem& problem);

/// Normalize and freeze a problem; throws SolverError carrying the first
/// violation when the problem is malformed. Idempotent on valid input.
ValidatedProblem validate(const Problem& problem);

}  // namespace layerheat
