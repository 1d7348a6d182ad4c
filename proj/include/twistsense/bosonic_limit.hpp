#pragma once

// N -> infinity limit. Under J_- / sqrt(N) -> a the spin protocols become
// displacement and squeezing protocols on a single bosonic mode:
//   field  w J_y / sqrt(N)      -> i w (a - a^dagger) / 2
//   TAT    i eta (J-^2 - J+^2)/N -> i eta (a^2 - a^dagger^2)
//   OAT    chi J_x^2 / N         -> chi (a + a^dagger)^2 / 4
//   echo observable 2 J_y / sqrt(N) -> P = -i a^dagger + i a
// The closed forms below are the analytic values of these limits; the
// truncated-Fock simulator evaluates the same protocols numerically.

#include <cmath>
#include <sstream>
#include <string>

#include "twistsense/metrology.hpp"

namespace twistsense {

/// Fock levels |0>, ..., |D-1>. Simulations reject any state that puts
/// tail_tolerance or more of its weight on the top two levels.
class FockSpace {
 public:
  explicit FockSpace(int truncation_dim = 400, double tail_tolerance = 1e-10)
      : truncation_dim_(truncation_dim), tail_tolerance_(tail_tolerance) {
    if (truncation_dim < 2) throw InvalidDimension("Fock truncation must keep >= 2 levels");
    if (!(tail_tolerance > 0.0)) throw InvalidArgument("tail tolerance must be positive");
  }

  int truncation_dim() const { return truncation_dim_; }
  Eigen::Index dim() const { return truncation_dim_; }
  double tail_tolerance() const { return tail_tolerance_; }

  Matrix annihilation() const {
    Matrix a = Matrix::Zero(dim(), dim());
    for (Eigen::Index n = 1; n < dim(); ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
  }

  StateVector vacuum() const {
    Vector v = Vector::Zero(dim());
    v(0) = 1.0;
    return {std::move(v), true};
  }

  /// Fraction of |v|^2 in the top two levels.
  double tail_population(const Vector& v) const {
    const double total = v.squaredNorm();
    if (total == 0.0) return 0.0;
    return v.tail(2).squaredNorm() / total;
  }

 private:
  int truncation_dim_;
  double tail_tolerance_;
};

/// Generators on the truncated mode, at unit strength.
struct FockGenerators {
  ComplexOperator field;  // i (a - a^dagger) / 2
  ComplexOperator tat;    // i (a^2 - a^dagger^2)
  ComplexOperator oat;    // (a + a^dagger)^2 / 4
  ComplexOperator p;      // -i a^dagger + i a
};

inline FockGenerators fock_generators(const FockSpace& space) {
  const Matrix a = space.annihilation();
  const Matrix ad = a.adjoint();
  const cplx i(0.0, 1.0);
  const Matrix x = a + ad;
  return {ComplexOperator(0.5 * i * (a - ad), OperatorKind::hermitian),
          ComplexOperator(i * (a * a - ad * ad), OperatorKind::hermitian),
          ComplexOperator(0.25 * (x * x), OperatorKind::hermitian),
          ComplexOperator(-i * ad + i * a, OperatorKind::hermitian)};
}

// ---------------------------------------------------------------------------
// Closed forms

/// Limit values of the dimensionless sensitivity, tau = 1, s = t/tau:
///   A  : 1
///   B  : s e^{2 x (1 - s)}
///   C  : (s + 1/(2x)) e^{2x(1 - s)} - 1/(2x)
///   B' : x s (1 - s) / 2
///   C' : (x / 4)(1 - s^2)
/// with x = eta*tau (B, C) or chi*tau (B', C'). Scheme C is singular at x = 0;
/// use closed_form_C_small_twist_limit there.
inline double closed_form(Scheme scheme, double twist_times_tau, double sensing_fraction) {
  require_fraction(sensing_fraction);
  require_twist(twist_times_tau);
  const double x = twist_times_tau;
  const double s = sensing_fraction;
  switch (scheme) {
    case Scheme::A: return 1.0;
    case Scheme::B: return s * std::exp(2.0 * x * (1.0 - s));
    case Scheme::C: {
      if (x == 0.0) throw SingularParameter("scheme C closed form is singular at eta*tau = 0");
      // s e^{2x(1-s)} + (e^{2x(1-s)} - 1)/(2x), without cancellation
      return s * std::exp(2.0 * x * (1.0 - s)) + std::expm1(2.0 * x * (1.0 - s)) / (2.0 * x);
    }
    case Scheme::Bprime: return 0.5 * x * s * (1.0 - s);
    case Scheme::Cprime: return 0.25 * x * (1.0 - s * s);
  }
  throw InvalidArgument("invalid scheme");
}

/// eta*tau -> 0 limit of the scheme C closed form.
inline double closed_form_C_small_twist_limit(double sensing_fraction) {
  require_fraction(sensing_fraction);
  return sensing_fraction;
}

struct ClosedFormOptimum {
  double value = 0.0;
  double t_opt = 0.0;
};

/// Maximum of closed_form over the sensing fraction, and where it sits.
inline ClosedFormOptimum closed_form_optimum(Scheme scheme, double twist_times_tau) {
  require_twist(twist_times_tau);
  const double x = twist_times_tau;
  switch (scheme) {
    case Scheme::A: return {1.0, 1.0};
    case Scheme::B:
      if (x > 0.5) return {std::exp(2.0 * x - 1.0) / (2.0 * x), 1.0 / (2.0 * x)};
      return {1.0, 1.0};
    case Scheme::C:
      if (x == 0.0) throw SingularParameter("scheme C closed form is singular at eta*tau = 0");
      return {std::expm1(2.0 * x) / (2.0 * x), 0.0};
    case Scheme::Bprime: return {x / 8.0, 0.5};
    case Scheme::Cprime: return {x / 4.0, 0.0};
  }
  throw InvalidArgument("invalid scheme");
}

/// Ratio of the optimized C and B limits: e (1 - e^{-2x}) above x = 0.5,
/// (e^{2x} - 1)/(2x) below. Never below 1, tends to e.
inline double enhancement_ratio(double eta_tau) {
  if (!(eta_tau > 0.0) || !std::isfinite(eta_tau)) throw InvalidArgument("enhancement ratio needs eta*tau > 0");
  if (eta_tau > 0.5) return std::exp(1.0) * -std::expm1(-2.0 * eta_tau);
  return std::expm1(2.0 * eta_tau) / (2.0 * eta_tau);
}

// ---------------------------------------------------------------------------
// Truncated Fock simulation

/// One family (scheme, twist) on a truncated mode; diagonalizes once.
class FockSensitivity {
 public:
  FockSensitivity(Scheme scheme, double twist_times_tau, const FockSpace& space)
      : space_(space),
        generators_(fock_generators(space)),
        pipeline_(scheme, twist_times_tau, generators_.field,
                  is_echo_scheme(scheme) ? generators_.oat : generators_.tat, space.vacuum()) {}

  Scheme scheme() const { return pipeline_.scheme(); }
  Method method() const { return is_echo_scheme(scheme()) ? Method::echo : Method::qfi; }

  /// Final state with the tail check applied to every intermediate state and
  /// derivative.
  SchemeState state(double sensing_fraction) const {
    return pipeline_.at(sensing_fraction, [this](const Vector& phi, const Vector& dphi) {
      check_tail(phi, "state");
      check_tail(dphi, "derivative");
    });
  }

  /// Spread of P at w = 0 (1 for every echo protocol on the vacuum).
  double p_spread(double sensing_fraction) const {
    return std::sqrt(variance(generators_.p, state(sensing_fraction).psi));
  }

  double operator()(double sensing_fraction) const {
    const SchemeState st = state(sensing_fraction);
    if (is_echo_scheme(scheme())) return error_propagation_sensitivity(generators_.p, st);
    return std::sqrt(qfi(st));
  }

 private:
  void check_tail(const Vector& v, const char* what) const {
    const double tail = space_.tail_population(v);
    if (tail >= space_.tail_tolerance()) {
      std::ostringstream msg;
      msg << "Fock truncation D=" << space_.truncation_dim() << " too small: " << what << " has population "
          << tail << " in the top two levels (tolerance " << space_.tail_tolerance() << ")";
      throw TruncationError(msg.str());
    }
  }

  FockSpace space_;
  FockGenerators generators_;
  detail::SchemePipeline pipeline_;
};

inline SensitivityRecord fock_simulate(Scheme scheme, double twist_times_tau, double sensing_fraction,
                                       const FockSpace& space) {
  const FockSensitivity eval(scheme, twist_times_tau, space);
  return {scheme, std::nullopt, twist_times_tau, sensing_fraction, eval(sensing_fraction), eval.method()};
}

}  // namespace twistsense
