#pragma once

// The five time-budgeted sensing protocols and their final states.
//
// With tau = 1 and s = t/tau the sensing fraction:
//   A  : psi = D(1) psi0
//   B  : psi = D(s) S(1 - s) psi0
//   C  : psi = D(s) U(1 - s) psi0,            U = exp[-i t' (H_field + H_tat)]
//   B' : psi = T_{-chi}(t') D(s) T_chi(t') psi0,           t' = (1 - s) / 2
//   C' : psi = V_{-chi}(t') D(s) V_chi(t') psi0,           V = exp[-i t' (H_field + H_oat)]
// Operator products act right to left: the rightmost factor is applied first.

#include <optional>
#include <tuple>
#include <string>
#include <string_view>

#include "twistsense/spin_core.hpp"

namespace twistsense {

enum class Scheme { A, B, C, Bprime, Cprime };

inline std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::A: return "A";
    case Scheme::B: return "B";
    case Scheme::C: return "C";
    case Scheme::Bprime: return "Bprime";
    case Scheme::Cprime: return "Cprime";
  }
  return "?";
}

inline Scheme parse_scheme(std::string_view tag) {
  if (tag == "A") return Scheme::A;
  if (tag == "B") return Scheme::B;
  if (tag == "C") return Scheme::C;
  if (tag == "Bprime" || tag == "B'") return Scheme::Bprime;
  if (tag == "Cprime" || tag == "C'") return Scheme::Cprime;
  throw InvalidArgument("unknown scheme '" + std::string(tag) + "'");
}

/// QFI path (optimal measurement) vs. echo readout of J_y.
inline bool is_echo_scheme(Scheme scheme) { return scheme == Scheme::Bprime || scheme == Scheme::Cprime; }

/// Whether the field is on while the twisting runs.
inline bool is_concurrent_scheme(Scheme scheme) { return scheme == Scheme::C || scheme == Scheme::Cprime; }

/// Preparation time t' for sensing fraction s at tau = 1. The echo schemes
/// spend the remainder on preparation and readout in equal halves.
inline double preparation_time(Scheme scheme, double sensing_fraction) {
  switch (scheme) {
    case Scheme::A: return 0.0;
    case Scheme::B:
    case Scheme::C: return 1.0 - sensing_fraction;
    case Scheme::Bprime:
    case Scheme::Cprime: return 0.5 * (1.0 - sensing_fraction);
  }
  return 0.0;
}

inline void require_fraction(double sensing_fraction) {
  if (!(sensing_fraction >= 0.0 && sensing_fraction <= 1.0)) {
    throw InvalidArgument("sensing fraction must lie in [0, 1], got " + std::to_string(sensing_fraction));
  }
}

inline void require_twist(double twist_strength) {
  if (!(twist_strength >= 0.0) || !std::isfinite(twist_strength)) {
    throw InvalidArgument("twist strength must be finite and >= 0, got " + std::to_string(twist_strength));
  }
}

/// One run, fully determined by dimensionless numbers. twist_strength is
/// eta*tau for B/C and chi*tau for B'/C'; it is ignored for A.
struct ProtocolConfig {
  Scheme scheme = Scheme::A;
  int n_spins = 1;
  double twist_strength = 0.0;
  double sensing_fraction = 1.0;
  double omega = 0.0;

  void validate() const {
    if (n_spins < 1) throw InvalidDimension("spin count must be >= 1, got " + std::to_string(n_spins));
    require_fraction(sensing_fraction);
    require_twist(twist_strength);
    if (!std::isfinite(omega)) throw InvalidArgument("omega must be finite");
  }
};

/// psi at the configured omega; dpsi = d psi / d omega at omega = 0.
struct SchemeState {
  StateVector psi;
  StateVector dpsi;
};

enum class HamiltonianKind { field, tat, oat };

/// field: w J_y / sqrt(N);  tat: i eta (J_-^2 - J_+^2) / N;  oat: chi J_x^2 / N.
inline ComplexOperator hamiltonian(const DickeSpace& space, HamiltonianKind kind, double strength) {
  if (!std::isfinite(strength)) throw InvalidArgument("Hamiltonian strength must be finite");
  const auto ops = collective_operators(space);
  const double n = space.n_spins();
  Matrix h;
  switch (kind) {
    case HamiltonianKind::field: h = (strength / std::sqrt(n)) * ops.Jy.matrix(); break;
    case HamiltonianKind::tat: {
      const Matrix& jm = ops.Jminus.matrix();
      const Matrix& jp = ops.Jplus.matrix();
      h = cplx(0.0, strength / n) * (jm * jm - jp * jp);
      break;
    }
    case HamiltonianKind::oat: h = (strength / n) * (ops.Jx.matrix() * ops.Jx.matrix()); break;
  }
  // Products of exact operators are Hermitian up to rounding; symmetrize.
  h = 0.5 * (h + h.adjoint()).eval();
  return {std::move(h), OperatorKind::hermitian};
}

namespace detail {

/// Scheme pipeline over an abstract mode: a unit-strength field generator,
/// a unit-strength twisting generator and an initial state. Shared by the
/// spin (Dicke) and bosonic (truncated Fock) engines.
class SchemePipeline {
 public:
  SchemePipeline(Scheme scheme, double twist_strength, const ComplexOperator& field_direction,
                 const ComplexOperator& unit_twist_generator, StateVector initial)
      : scheme_(scheme), field_(field_direction), initial_(std::move(initial)) {
    require_twist(twist_strength);
    require_same_dim(field_direction.dim(), initial_.dim(), "scheme pipeline");
    require_same_dim(unit_twist_generator.dim(), initial_.dim(), "scheme pipeline");
    if (scheme_ != Scheme::A) {
      const ComplexOperator twist(twist_strength * unit_twist_generator.matrix(), OperatorKind::hermitian);
      if (is_concurrent_scheme(scheme_)) {
        twist_.emplace(twist, field_direction);
        if (scheme_ == Scheme::Cprime) reversed_.emplace(twist_->negated());
      } else {
        twist_.emplace(twist);
      }
    }
  }

  Scheme scheme() const { return scheme_; }
  Eigen::Index dim() const { return initial_.dim(); }

  /// State and derivative at omega = 0. `observe` (if given) sees every
  /// intermediate state/derivative pair, e.g. for truncation checks.
  template <class Observer>
  SchemeState at(double sensing_fraction, Observer&& observe) const {
    require_fraction(sensing_fraction);
    const double s = sensing_fraction;
    const double tp = preparation_time(scheme_, s);
    Vector phi = initial_.amplitudes();
    Vector dphi = Vector::Zero(dim());

    // At omega = 0 the field stage D(d) is the identity; its derivative adds
    // -i d G phi.
    const auto field_stage = [&](double d) { dphi += cplx(0.0, -d) * (field_.matrix() * phi); };

    switch (scheme_) {
      case Scheme::A:
        field_stage(1.0);
        break;
      case Scheme::B:
        phi = twist_->apply(tp, phi);  // S(t')
        observe(phi, dphi);
        field_stage(s);  // D(s)
        break;
      case Scheme::C:
        std::tie(phi, dphi) = twist_->apply_with_derivative(tp, phi, dphi);  // U(t')
        observe(phi, dphi);
        field_stage(s);  // D(s)
        break;
      case Scheme::Bprime:
        phi = twist_->apply(tp, phi);  // T_chi(t')
        observe(phi, dphi);
        field_stage(s);  // D(s)
        observe(phi, dphi);
        phi = twist_->apply(-tp, phi);  // T_{-chi}(t') = T_chi(t')^dagger
        dphi = twist_->apply(-tp, dphi);
        break;
      case Scheme::Cprime: {
        std::tie(phi, dphi) = twist_->apply_with_derivative(tp, phi, dphi);  // V_chi(t')
        observe(phi, dphi);
        field_stage(s);  // D(s)
        observe(phi, dphi);
        // The echo reverses the twisting only; the field keeps its sign.
        std::tie(phi, dphi) = reversed_->apply_with_derivative(tp, phi, dphi);  // V_{-chi}(t')
        break;
      }
    }
    observe(phi, dphi);
    return {StateVector(std::move(phi), true), StateVector::unnormalized(std::move(dphi))};
  }

  SchemeState at(double sensing_fraction) const {
    return at(sensing_fraction, [](const Vector&, const Vector&) {});
  }

 private:
  Scheme scheme_;
  ComplexOperator field_;
  StateVector initial_;
  std::optional<SpectralPropagator> twist_;
  std::optional<SpectralPropagator> reversed_;
};

}  // namespace detail

inline HamiltonianKind twist_kind(Scheme scheme) {
  return is_echo_scheme(scheme) ? HamiltonianKind::oat : HamiltonianKind::tat;
}

/// Evaluates one (scheme, N, twist) family at any sensing fraction. The
/// twisting generator is diagonalized once on construction, so sweeping the
/// sensing fraction costs O(dim^2) per point.
class ProtocolEvaluator {
 public:
  ProtocolEvaluator(Scheme scheme, int n_spins, double twist_strength)
      : space_(n_spins),
        twist_strength_(twist_strength),
        pipeline_(scheme, twist_strength, hamiltonian(space_, HamiltonianKind::field, 1.0),
                  hamiltonian(space_, twist_kind(scheme), 1.0), initial_state(space_)) {}

  Scheme scheme() const { return pipeline_.scheme(); }
  const DickeSpace& space() const { return space_; }
  double twist_strength() const { return twist_strength_; }

  SchemeState at(double sensing_fraction) const { return pipeline_.at(sensing_fraction); }

 private:
  DickeSpace space_;
  double twist_strength_;
  detail::SchemePipeline pipeline_;
};

/// Final state at arbitrary omega by direct exponentiation of each stage's
/// full Hamiltonian (no derivative machinery).
inline StateVector state_at_field(const ProtocolConfig& cfg) {
  cfg.validate();
  const DickeSpace space(cfg.n_spins);
  const double s = cfg.sensing_fraction;
  const double tp = preparation_time(cfg.scheme, s);
  const ComplexOperator field = hamiltonian(space, HamiltonianKind::field, cfg.omega);
  const ComplexOperator twist = hamiltonian(space, twist_kind(cfg.scheme), cfg.twist_strength);
  const auto sum = [](const ComplexOperator& a, const ComplexOperator& b, double sign_b) {
    return ComplexOperator(a.matrix() + sign_b * b.matrix(), OperatorKind::hermitian);
  };
  const StateVector psi0 = initial_state(space);
  switch (cfg.scheme) {
    case Scheme::A: return propagate(field, 1.0, psi0);
    case Scheme::B: return propagate(field, s, propagate(twist, tp, psi0));
    case Scheme::C: return propagate(field, s, propagate(sum(field, twist, 1.0), tp, psi0));
    case Scheme::Bprime: return propagate(twist, -tp, propagate(field, s, propagate(twist, tp, psi0)));
    case Scheme::Cprime:
      return propagate(sum(field, twist, -1.0), tp, propagate(field, s, propagate(sum(field, twist, 1.0), tp, psi0)));
  }
  throw InvalidArgument("invalid scheme");
}

inline SchemeState final_state(const ProtocolConfig& cfg) {
  cfg.validate();
  SchemeState out = ProtocolEvaluator(cfg.scheme, cfg.n_spins, cfg.twist_strength).at(cfg.sensing_fraction);
  if (cfg.omega != 0.0) out.psi = state_at_field(cfg);
  return out;
}

}  // namespace twistsense
