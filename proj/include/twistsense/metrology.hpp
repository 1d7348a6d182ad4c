#pragma once

// Sensitivity figures of merit. Everything is reported as the dimensionless
// (sqrt(nu) tau delta_omega)^{-1} with tau = 1.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <string_view>

#include "twistsense/protocols.hpp"

namespace twistsense {

enum class Method { qfi, echo, closed_form };

inline std::string_view to_string(Method method) {
  switch (method) {
    case Method::qfi: return "qfi";
    case Method::echo: return "echo";
    case Method::closed_form: return "closed_form";
  }
  return "?";
}

/// One evaluated point. n_spins is empty in the bosonic (N -> infinity) limit.
struct SensitivityRecord {
  Scheme scheme = Scheme::A;
  std::optional<int> n_spins;
  double twist_strength = 0.0;
  double sensing_fraction = 1.0;
  double sensitivity = 0.0;
  Method method = Method::qfi;
};

/// |a - b| / max(|a|, |b|, 1)
inline double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

/// Pure-state quantum Fisher information 4 [<dpsi|dpsi> - |<psi|dpsi>|^2].
inline double qfi(const SchemeState& state) {
  if (!state.psi.normalized()) throw ContractViolation("qfi requires a normalized state");
  require_same_dim(state.psi.dim(), state.dpsi.dim(), "qfi");
  const Vector& psi = state.psi.amplitudes();
  const Vector& dpsi = state.dpsi.amplitudes();
  const double f = 4.0 * (dpsi.squaredNorm() - std::norm(psi.dot(dpsi)));
  return std::max(0.0, f);
}

/// d<A>/dw = 2 Re <psi|A|dpsi> for Hermitian A.
inline double expectation_derivative(const ComplexOperator& observable, const SchemeState& state) {
  require_same_dim(observable.dim(), state.psi.dim(), "expectation derivative");
  return 2.0 * state.psi.amplitudes().dot(observable.matrix() * state.dpsi.amplitudes()).real();
}

/// |d<A>/dw| / Delta A at w = 0; exactly 0 when the slope vanishes.
inline double error_propagation_sensitivity(const ComplexOperator& observable, const SchemeState& state,
                                            double* spread_out = nullptr) {
  const double spread = std::sqrt(variance(observable, state.psi));
  if (spread_out) *spread_out = spread;
  const double slope = std::abs(expectation_derivative(observable, state));
  if (slope == 0.0) return 0.0;
  if (spread == 0.0) throw ContractViolation("observable has zero spread but nonzero slope");
  return slope / spread;
}

inline void require_qfi_scheme(Scheme scheme) {
  if (is_echo_scheme(scheme)) {
    throw WrongMethod("scheme " + std::string(to_string(scheme)) + " uses echo readout, not the QFI");
  }
}

inline void require_echo_scheme(Scheme scheme) {
  if (!is_echo_scheme(scheme)) {
    throw WrongMethod("scheme " + std::string(to_string(scheme)) + " is evaluated through the QFI, not echo");
  }
}

/// Echo readout measures J_y. At w = 0 the echo restores the initial coherent
/// state, whose J_y spread must be sqrt(N)/2.
inline double echo_sensitivity_of(const ComplexOperator& jy, int n_spins, const SchemeState& state) {
  double spread = 0.0;
  const double value = error_propagation_sensitivity(jy, state, &spread);
  const double expected = 0.5 * std::sqrt(static_cast<double>(n_spins));
  if (std::abs(spread - expected) > 1e-9) {
    throw ContractViolation("echo J_y spread " + std::to_string(spread) + " differs from sqrt(N)/2");
  }
  return value;
}

/// sqrt(F)/tau for A, B, C.
inline SensitivityRecord qfi_sensitivity(const ProtocolConfig& cfg) {
  require_qfi_scheme(cfg.scheme);
  ProtocolConfig at_zero = cfg;
  at_zero.omega = 0.0;
  const double f = qfi(final_state(at_zero));
  return {cfg.scheme, cfg.n_spins, cfg.twist_strength, cfg.sensing_fraction, std::sqrt(f), Method::qfi};
}

inline SensitivityRecord echo_sensitivity(const ProtocolConfig& cfg) {
  require_echo_scheme(cfg.scheme);
  ProtocolConfig at_zero = cfg;
  at_zero.omega = 0.0;
  const DickeSpace space(cfg.n_spins);
  const auto jy = collective_operators(space).Jy;
  const double value = echo_sensitivity_of(jy, cfg.n_spins, final_state(at_zero));
  return {cfg.scheme, cfg.n_spins, cfg.twist_strength, cfg.sensing_fraction, value, Method::echo};
}

/// Dispatches on the scheme: QFI for A/B/C, echo for B'/C'.
inline SensitivityRecord sensitivity(const ProtocolConfig& cfg) {
  return is_echo_scheme(cfg.scheme) ? echo_sensitivity(cfg) : qfi_sensitivity(cfg);
}

/// Sweeps the sensing fraction of one (scheme, N, twist) family reusing a
/// single diagonalization.
class SpinSensitivity {
 public:
  SpinSensitivity(Scheme scheme, int n_spins, double twist_strength)
      : evaluator_(scheme, n_spins, twist_strength), jy_(collective_operators(evaluator_.space()).Jy) {}

  double operator()(double sensing_fraction) const {
    const SchemeState state = evaluator_.at(sensing_fraction);
    if (is_echo_scheme(evaluator_.scheme())) {
      return echo_sensitivity_of(jy_, evaluator_.space().n_spins(), state);
    }
    return std::sqrt(qfi(state));
  }

  Method method() const { return is_echo_scheme(evaluator_.scheme()) ? Method::echo : Method::qfi; }

 private:
  ProtocolEvaluator evaluator_;
  ComplexOperator jy_;
};

/// Echo sensitivity of B' in closed form:
///   (t/tau) (N - 1) |sin(theta) cos^{N-2}(theta)|,  theta = chi tau (1 - t/tau) / (2N).
inline double closed_form_Bprime(int n_spins, double chi_tau, double sensing_fraction) {
  if (n_spins < 1) throw InvalidDimension("spin count must be >= 1");
  require_fraction(sensing_fraction);
  const double n = n_spins;
  const double theta = chi_tau * (1.0 - sensing_fraction) / (2.0 * n);
  return sensing_fraction * (n - 1.0) * std::abs(std::sin(theta) * std::pow(std::cos(theta), n - 2.0));
}

/// X(alpha, beta, gamma) = <+|^N e^{gamma J-} e^{beta Jz} e^{alpha J+} |+>^N
///   = [e^{-beta/2}/2 + e^{beta/2} (alpha + 1)(gamma + 1)/2]^N.
inline cplx generating_function(cplx alpha, cplx beta, cplx gamma, int n_spins) {
  if (n_spins < 1) throw InvalidDimension("spin count must be >= 1");
  const cplx base = 0.5 * std::exp(-0.5 * beta) + 0.5 * std::exp(0.5 * beta) * (alpha + 1.0) * (gamma + 1.0);
  return std::pow(base, n_spins);
}

/// <+|^N J_-^2 e^{beta J_z} |+>^N at beta = -2i phase, from the second gamma
/// derivative of the generating function:
///   N (N - 1) / 4 * cos^{N-2}(phase) * e^{-2i phase}.
inline cplx moment_oracle(int n_spins, double phase) {
  if (n_spins < 2) throw InvalidDimension("moment oracle needs N >= 2 (J_-^2 vanishes on a single spin)");
  const double n = n_spins;
  return 0.25 * n * (n - 1.0) * std::pow(std::cos(phase), n - 2.0) * std::polar(1.0, -2.0 * phase);
}

/// The same moment by dense matrix algebra on the Dicke basis.
inline cplx moment_direct(int n_spins, double phase) {
  const DickeSpace space(n_spins);
  const auto ops = collective_operators(space);
  const StateVector plus = plus_state(space);
  Vector rotated = plus.amplitudes();
  for (Eigen::Index k = 0; k < space.dim(); ++k) rotated(k) *= std::exp(cplx(0.0, -2.0 * phase) * space.m_of(k));
  const Matrix& jm = ops.Jminus.matrix();
  return plus.amplitudes().dot(jm * (jm * rotated));
}

}  // namespace twistsense
