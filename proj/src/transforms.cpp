#include "layerheat/transforms.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace layerheat {

namespace {

constexpr double kExpOverflow = 700.0;   // exp argument ceiling
constexpr double kExpUnderflow = -745.0; // below this exp(x) is 0.0

// exp(z) with overflow signalling; hard underflow returns exact 0.
Complex safe_exp(Complex z) {
  if (z.real() > kExpOverflow)
    throw SolverError(ErrorCode::OverflowAtArgument,
                      "exponent Re = " + std::to_string(z.real()));
  if (z.real() < kExpUnderflow) return {0.0, 0.0};
  return std::exp(z);
}

// One additive piece of a transform: coeff * exp(exponent).
struct ExpTerm {
  Complex coeff;
  Complex exponent;
};

Complex eval_terms(const std::vector<ExpTerm>& terms, Complex extra) {
  Complex sum{0.0, 0.0};
  for (const auto& term : terms) sum += term.coeff * safe_exp(term.exponent + extra);
  return sum;
}

// integral over [a,b] of y^m e^{-iky} dy for m = 0..deg, expressed as
// A_m e^{-ika} + B_m e^{-ikb}. Requires k != 0 (small k handled by Taylor).
void powers_against_exponential(Complex k, double a, double b, int deg,
                                std::vector<Complex>& A, std::vector<Complex>& B) {
  const Complex inv_ik = 1.0 / (Complex(0, 1) * k);
  A.assign(deg + 1, Complex{});
  B.assign(deg + 1, Complex{});
  A[0] = inv_ik;
  B[0] = -inv_ik;
  double apow = 1.0, bpow = 1.0;
  for (int m = 1; m <= deg; ++m) {
    apow *= a;
    bpow *= b;
    A[m] = inv_ik * (apow + static_cast<double>(m) * A[m - 1]);
    B[m] = inv_ik * (-bpow + static_cast<double>(m) * B[m - 1]);
  }
}

// Moments integral over [a,b] of y^r p(y) dy for the Taylor branch.
double poly_moment(const std::vector<double>& coeffs, double a, double b, int r) {
  double sum = 0.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    double p = static_cast<double>(m + r + 1);
    sum += coeffs[m] * (std::pow(b, p) - std::pow(a, p)) / p;
  }
  return sum;
}

// Terms of the transform of polynomial data on [a,b].
std::vector<ExpTerm> polynomial_transform_terms(const std::vector<double>& coeffs,
                                                double a, double b, Complex k) {
  const double radius = std::max(std::abs(a), std::abs(b));
  if (std::abs(k) * std::max(radius, b - a) <= 1.0) {
    // Entire-function Taylor series around k = 0; converges fast here.
    Complex sum{0.0, 0.0};
    Complex factor{1.0, 0.0};  // (-ik)^r / r!
    for (int r = 0; r < 48; ++r) {
      Complex term = factor * poly_moment(coeffs, a, b, r);
      sum += term;
      if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) && r > 4) break;
      factor *= Complex(0, -1) * k / static_cast<double>(r + 1);
    }
    return {{sum, Complex{0.0, 0.0}}};
  }
  std::vector<Complex> A, B;
  powers_against_exponential(k, a, b, static_cast<int>(coeffs.size()) - 1, A, B);
  Complex ca{0.0, 0.0}, cb{0.0, 0.0};
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    ca += coeffs[m] * A[m];
    cb += coeffs[m] * B[m];
  }
  const Complex mik = Complex(0, -1) * k;
  return {{ca, mik * a}, {cb, mik * b}};
}

// Terms for one linear segment [p,q] with end values fp, fq against
// e^{-iky}; switches to a series when the segment phase is small.
void segment_transform_terms(Complex k, double p, double q, double fp, double fq,
                             std::vector<ExpTerm>& out) {
  const Complex s = Complex(0, -1) * k;
  const double h = q - p;
  const double slope = (fq - fp) / h;
  if (std::abs(s) * h <= 0.25) {
    Complex sum{0.0, 0.0};
    Complex spow{1.0, 0.0};  // s^r / r!
    for (int r = 0; r < 32; ++r) {
      double hr1 = std::pow(h, r + 1);
      Complex term = spow * (fp * hr1 / (r + 1) + slope * hr1 * h / (r + 2));
      sum += term;
      if (std::abs(term) < 1e-18 * (1.0 + std::abs(sum)) && r > 3) break;
      spow *= s / static_cast<double>(r + 1);
    }
    out.push_back({sum, s * p});
    return;
  }
  const Complex inv_s = 1.0 / s;
  out.push_back({fq * inv_s - slope * inv_s * inv_s, s * q});
  out.push_back({-(fp * inv_s - slope * inv_s * inv_s), s * p});
}

std::vector<ExpTerm> initial_transform_terms(const ValidatedProblem& problem,
                                             int layer, Complex k) {
  // The transform integrates e^{-ikx} in the shifted coordinate while the
  // initial data lives in the original one: substitute x = y - shift.
  const double a = problem.breakpoint(layer - 1);
  const double b = problem.breakpoint(layer);
  const double shift = problem.shift();
  const InitialCondition& ic = problem.initial(layer);

  std::vector<ExpTerm> terms = std::visit(
      [&](const auto& s) -> std::vector<ExpTerm> {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, InitialCondition::Constant>) {
          return polynomial_transform_terms({s.value}, a, b, k);
        } else if constexpr (std::is_same_v<S, InitialCondition::PolynomialInX>) {
          if (shift == 0.0) return polynomial_transform_terms(s.coeffs, a, b, k);
          // Rebase p(x + shift) to a polynomial in the shifted coordinate.
          std::vector<double> c(s.coeffs.size(), 0.0);
          for (std::size_t m = 0; m < s.coeffs.size(); ++m) {
            double binom = 1.0;
            double spow = 1.0;
            for (std::size_t r = 0; r <= m; ++r) {
              c[m - r] += s.coeffs[m] * binom * spow;
              binom *= static_cast<double>(m - r) / static_cast<double>(r + 1);
              spow *= shift;
            }
          }
          return polynomial_transform_terms(c, a, b, k);
        } else {
          std::vector<ExpTerm> out;
          const auto& pts = s.points;
          for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double p = std::max(a, pts[i].first - shift);
            double q = std::min(b, pts[i + 1].first - shift);
            if (q <= p) continue;
            double fp = ic.value(p + shift);
            double fq = ic.value(q + shift);
            segment_transform_terms(k, p, q, fp, fq, out);
          }
          return out;
        }
      },
      ic.data);
  return terms;
}

// (e^{zT} - 1)/z with the exponent `shifted` applied to both pieces:
// returns (e^{zT + shift} - e^{shift})/z, series branch near z = 0.
Complex scaled_e1(Complex z, double T, Complex shift) {
  if (std::abs(z) * T <= 1e-4) {
    Complex zT = z * T;
    Complex series =
        T * (1.0 + zT * (0.5 + zT * (1.0 / 6.0 + zT * (1.0 / 24.0 +
              zT * (1.0 / 120.0 + zT * (1.0 / 720.0 + zT / 5040.0))))));
    return safe_exp(shift) * series;
  }
  return (safe_exp(z * T + shift) - safe_exp(shift)) / z;
}

}  // namespace

Complex initial_transform(const ValidatedProblem& problem, int layer, Complex k) {
  return initial_transform_scaled(problem, layer, k, Complex{0.0, 0.0});
}

Complex initial_transform_scaled(const ValidatedProblem& problem, int layer,
                                 Complex k, Complex extra) {
  if (layer < 1 || layer > problem.num_layers())
    throw SolverError(ErrorCode::OutOfDomain, "layer index out of range");
  return eval_terms(initial_transform_terms(problem, layer, k), extra);
}

Complex boundary_transform(const TimeSignal& signal, Complex omega, double t) {
  return boundary_transform_scaled(signal, omega, t, 0.0);
}

Complex boundary_transform_scaled(const TimeSignal& signal, Complex omega,
                                  double horizon, double tau) {
  if (horizon < 0.0)
    throw SolverError(ErrorCode::NonPositiveTime, "transform horizon < 0");
  const double T = horizon;
  const Complex shift = -omega * tau;

  return std::visit(
      [&](const auto& s) -> Complex {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, TimeSignal::Constant>) {
          return s.value * scaled_e1(omega, T, shift);
        } else if constexpr (std::is_same_v<S, TimeSignal::Cosine>) {
          Complex iw(0.0, s.frequency);
          return 0.5 * s.amplitude *
                 (scaled_e1(omega + iw, T, shift) + scaled_e1(omega - iw, T, shift));
        } else if constexpr (std::is_same_v<S, TimeSignal::Sine>) {
          Complex iw(0.0, s.frequency);
          return s.amplitude / Complex(0.0, 2.0) *
                 (scaled_e1(omega + iw, T, shift) - scaled_e1(omega - iw, T, shift));
        } else if constexpr (std::is_same_v<S, TimeSignal::Exponential>) {
          return s.amplitude * scaled_e1(omega + s.rate, T, shift);
        } else if constexpr (std::is_same_v<S, TimeSignal::Polynomial>) {
          // J_m = integral_0^T s^m e^{omega s} ds, scaled by e^{shift};
          // upward recurrence, series fallback for small |omega| T.
          const std::size_t deg = s.coeffs.size();
          if (deg == 0) return {0.0, 0.0};
          std::vector<Complex> J(deg);
          if (std::abs(omega) * T <= 1e-4) {
            Complex es = safe_exp(shift);
            for (std::size_t m = 0; m < deg; ++m) {
              // sum_r (omega T)^r/r! * T^{m+1}/(m+r+1)
              Complex sum{0.0, 0.0};
              Complex wTpow{1.0, 0.0};
              double Tm1 = std::pow(T, static_cast<double>(m) + 1.0);
              for (int r = 0; r < 24; ++r) {
                sum += wTpow * Tm1 / static_cast<double>(r + static_cast<int>(m) + 1);
                wTpow *= omega * T / static_cast<double>(r + 1);
              }
              J[m] = es * sum;
            }
          } else {
            Complex eT = safe_exp(omega * T + shift);
            Complex e0 = safe_exp(shift);
            J[0] = (eT - e0) / omega;
            double Tpow = 1.0;
            for (std::size_t m = 1; m < deg; ++m) {
              Tpow *= T;
              J[m] = (Tpow * eT - static_cast<double>(m) * J[m - 1]) / omega;
            }
          }
          Complex sum{0.0, 0.0};
          for (std::size_t m = 0; m < deg; ++m) sum += s.coeffs[m] * J[m];
          return sum;
        } else {  // Sampled: exact piecewise-linear integration.
          Complex sum{0.0, 0.0};
          const auto& pts = s.points;
          for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double p = pts[i].first, q = std::min(pts[i + 1].first, T);
            if (p >= T) break;
            if (q <= p) continue;
            double fp = pts[i].second;
            double fq = pts[i].second + (pts[i + 1].second - pts[i].second) *
                                            (q - p) / (pts[i + 1].first - p);
            double h = q - p;
            double slope = (fq - fp) / h;
            if (std::abs(omega) * h <= 1e-4) {
              Complex es = safe_exp(omega * p + shift);
              Complex acc{0.0, 0.0};
              Complex wpow{1.0, 0.0};
              for (int r = 0; r < 16; ++r) {
                double hr1 = std::pow(h, r + 1);
                acc += wpow * (fp * hr1 / (r + 1) + slope * hr1 * h / (r + 2));
                wpow *= omega / static_cast<double>(r + 1);
              }
              sum += es * acc;
            } else {
              Complex inv = 1.0 / omega;
              sum += safe_exp(omega * q + shift) * (fq * inv - slope * inv * inv) -
                     safe_exp(omega * p + shift) * (fp * inv - slope * inv * inv);
            }
          }
          return sum;
        }
      },
      signal.data);
}

Complex TransformCache::initial(int layer, Complex k) const {
  InitialKey key{layer, k.real(), k.imag()};
  {
    std::shared_lock lock(mutex_);
    auto it = initial_memo_.find(key);
    if (it != initial_memo_.end()) return it->second;
  }
  Complex value = initial_transform(*problem_, layer, k);
  std::unique_lock lock(mutex_);
  return initial_memo_.emplace(key, value).first->second;
}

Complex TransformCache::boundary(bool right_side, Complex omega, double t) const {
  BoundaryKey key{right_side ? 1 : 0, omega.real(), omega.imag(), t};
  {
    std::shared_lock lock(mutex_);
    auto it = boundary_memo_.find(key);
    if (it != boundary_memo_.end()) return it->second;
  }
  const TimeSignal& signal =
      right_side ? problem_->boundary().f_right : problem_->boundary().f_left;
  Complex value = boundary_transform(signal, omega, t);
  std::unique_lock lock(mutex_);
  return boundary_memo_.emplace(key, value).first->second;
}

std::size_t TransformCache::size() const {
  std::shared_lock lock(mutex_);
  return initial_memo_.size() + boundary_memo_.size();
}

}  // namespace layerheat
