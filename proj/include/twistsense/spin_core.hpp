#pragma once

// Dense linear algebra on the symmetric (Dicke) sector of N spin-1/2
// particles: collective operators, states, and propagators generated by
// Hermitian operators, including the exact derivative of a propagator with
// respect to a scalar coupling.
//
// Conventions: hbar = 1, J_mu = (1/2) sum_i sigma_i^(mu), so j = N/2 and the
// basis index k in [0, N] carries J_z eigenvalue m = -j + k.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>

#include "twistsense/errors.hpp"

namespace twistsense {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-10;

enum class OperatorKind { hermitian, unitary, general };

/// Dense square complex matrix tagged with the role it plays. The tag is
/// checked on construction: a hermitian or unitary operator that is not,
/// within tolerance, is a contract violation.
class ComplexOperator {
 public:
  ComplexOperator(Matrix entries, OperatorKind kind) : entries_(std::move(entries)), kind_(kind) {
    if (entries_.rows() != entries_.cols()) {
      throw DimensionMismatch("operator must be square, got " + std::to_string(entries_.rows()) + "x" +
                              std::to_string(entries_.cols()));
    }
    if (kind_ == OperatorKind::hermitian && !hermitian(entries_)) {
      throw ContractViolation("operator tagged hermitian fails the Hermiticity check");
    }
    if (kind_ == OperatorKind::unitary) {
      const Matrix defect = entries_.adjoint() * entries_ - Matrix::Identity(dim(), dim());
      if (defect.cwiseAbs().maxCoeff() > kUnitaryTolerance) {
        throw ContractViolation("operator tagged unitary fails the unitarity check");
      }
    }
  }

  static ComplexOperator general(Matrix entries) { return {std::move(entries), OperatorKind::general}; }

  Eigen::Index dim() const { return entries_.rows(); }
  const Matrix& matrix() const { return entries_; }
  OperatorKind kind() const { return kind_; }

  /// max|A - A^dagger| <= 1e-12 * max|A|, elementwise.
  static bool hermitian(const Matrix& a) {
    if (a.size() == 0) return true;
    const double scale = a.cwiseAbs().maxCoeff();
    const double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
    return defect <= kHermitianTolerance * scale;
  }

 private:
  Matrix entries_;
  OperatorKind kind_;
};

/// Complex amplitude vector. Derivative vectors are carried with
/// normalized=false.
class StateVector {
 public:
  StateVector(Vector amplitudes, bool normalized) : amplitudes_(std::move(amplitudes)), normalized_(normalized) {
    if (normalized_ && std::abs(amplitudes_.norm() - 1.0) > kNormTolerance) {
      throw ContractViolation("state flagged normalized has norm " + std::to_string(amplitudes_.norm()));
    }
  }

  static StateVector unnormalized(Vector amplitudes) { return {std::move(amplitudes), false}; }

  Eigen::Index dim() const { return amplitudes_.size(); }
  const Vector& amplitudes() const { return amplitudes_; }
  bool normalized() const { return normalized_; }
  double norm() const { return amplitudes_.norm(); }

 private:
  Vector amplitudes_;
  bool normalized_;
};

class DickeSpace {
 public:
  explicit DickeSpace(int n_spins) : n_spins_(n_spins) {
    if (n_spins < 1) throw InvalidDimension("spin count must be >= 1, got " + std::to_string(n_spins));
  }

  /// Accepts a real-valued count (e.g. parsed from text) and rejects
  /// non-integral or non-positive values.
  static DickeSpace from_real(double n_spins) {
    if (!std::isfinite(n_spins) || n_spins < 1.0 || std::floor(n_spins) != n_spins) {
      throw InvalidDimension("spin count must be a positive integer, got " + std::to_string(n_spins));
    }
    return DickeSpace(static_cast<int>(n_spins));
  }

  int n_spins() const { return n_spins_; }
  double j() const { return 0.5 * n_spins_; }
  Eigen::Index dim() const { return n_spins_ + 1; }
  double m_of(Eigen::Index k) const { return -j() + static_cast<double>(k); }

 private:
  int n_spins_;
};

struct CollectiveOperators {
  ComplexOperator Jx;
  ComplexOperator Jy;
  ComplexOperator Jz;
  ComplexOperator Jplus;
  ComplexOperator Jminus;
};

inline CollectiveOperators collective_operators(const DickeSpace& space) {
  const Eigen::Index dim = space.dim();
  const double j = space.j();
  Matrix jz = Matrix::Zero(dim, dim);
  Matrix jp = Matrix::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double m = space.m_of(k);
    jz(k, k) = m;
    // J+ |j,m> = sqrt(j(j+1) - m(m+1)) |j,m+1>
    if (k + 1 < dim) jp(k + 1, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  Matrix jm = jp.adjoint();
  Matrix jx = 0.5 * (jp + jm);
  Matrix jy = (jp - jm) / cplx(0.0, 2.0);
  return {ComplexOperator(std::move(jx), OperatorKind::hermitian),
          ComplexOperator(std::move(jy), OperatorKind::hermitian),
          ComplexOperator(std::move(jz), OperatorKind::hermitian), ComplexOperator::general(std::move(jp)),
          ComplexOperator::general(std::move(jm))};
}

/// The coherent spin state with every spin down: m = -j.
inline StateVector initial_state(const DickeSpace& space) {
  Vector v = Vector::Zero(space.dim());
  v(0) = 1.0;
  return {std::move(v), true};
}

/// J_x = +N/2 eigenstate; amplitude at m is sqrt(C(N, m + j)) / 2^(N/2).
inline StateVector plus_state(const DickeSpace& space) {
  const int n = space.n_spins();
  Vector v(space.dim());
  for (int k = 0; k <= n; ++k) {
    // log-binomial keeps large N finite
    const double log_amp = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) -
                           0.5 * n * std::log(2.0);
    v(k) = std::exp(log_amp);
  }
  v /= v.norm();
  return {std::move(v), true};
}

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

inline void require_hermitian(const ComplexOperator& op, const char* what) {
  if (op.kind() != OperatorKind::hermitian && !ComplexOperator::hermitian(op.matrix())) {
    throw ContractViolation(std::string(what) + " must be Hermitian");
  }
}

/// A state together with its (unnormalized) derivative in the coupling.
struct StatePair {
  StateVector state;
  StateVector derivative;
};

/// exp(-i d (H0 + w G)) and its w-derivative at w = 0, built from one
/// eigendecomposition H0 = Q diag(lambda) Q^dagger.
///
/// The derivative is the off-diagonal block of the exponential of the block
/// upper-triangular generator [[-iH0, -iG], [0, -iH0]] d. In the eigenbasis of
/// H0 that block has the closed form
///   (-i d G~)_kl * (e^{a_k} - e^{a_l}) / (a_k - a_l),   a_k = -i lambda_k d,
/// with the divided difference replaced by e^{a_k} on (near) degeneracies.
///
/// Immutable after construction; safe to share across threads.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const ComplexOperator& generator) {
    require_hermitian(generator, "generator");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(generator.matrix());
    if (solver.info() != Eigen::Success) throw ContractViolation("Hermitian eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
  }

  SpectralPropagator(const ComplexOperator& generator, const ComplexOperator& direction)
      : SpectralPropagator(generator) {
    set_direction(direction);
  }

  Eigen::Index dim() const { return eigenvalues_.size(); }
  bool has_direction() const { return direction_in_eigenbasis_.size() != 0; }

  /// Propagator of -H0 + w G (same eigenvectors and coupling direction).
  SpectralPropagator negated() const {
    SpectralPropagator out = *this;
    out.eigenvalues_ = -eigenvalues_;
    return out;
  }

  Matrix unitary(double duration) const {
    const Vector phases = phase_factors(duration);
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
  }

  Vector apply(double duration, const Vector& psi) const {
    require_same_dim(psi.size(), dim(), "propagate");
    if (duration == 0.0) return psi;
    Vector coeffs = eigenvectors_.adjoint() * psi;
    coeffs.array() *= phase_factors(duration).array();
    return eigenvectors_ * coeffs;
  }

  StateVector apply(double duration, const StateVector& psi) const {
    Vector out = apply(duration, psi.amplitudes());
    if (psi.normalized()) return {std::move(out), true};
    return StateVector::unnormalized(std::move(out));
  }

  /// (U psi, U dpsi + dU psi) for U = exp(-i d (H0 + w G)) at w = 0.
  std::pair<Vector, Vector> apply_with_derivative(double duration, const Vector& psi, const Vector& dpsi) const {
    if (!has_direction()) throw ContractViolation("propagator has no coupling direction");
    require_same_dim(psi.size(), dim(), "propagate_with_derivative");
    require_same_dim(dpsi.size(), dim(), "propagate_with_derivative");
    const Eigen::Index n = dim();
    const Vector phases = phase_factors(duration);
    const Vector c = eigenvectors_.adjoint() * psi;
    const Vector dc = eigenvectors_.adjoint() * dpsi;

    Vector out = (phases.array() * c.array()).matrix();
    Vector dout = (phases.array() * dc.array()).matrix();
    if (duration != 0.0) {
      const cplx minus_i_d(0.0, -duration);
      for (Eigen::Index k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (Eigen::Index l = 0; l < n; ++l) {
          acc += direction_in_eigenbasis_(k, l) * divided_difference(k, l, duration, phases) * c(l);
        }
        dout(k) += minus_i_d * acc;
      }
    }
    return {eigenvectors_ * out, eigenvectors_ * dout};
  }

  /// Full derivative matrix dU/dw at w = 0 (for tests and small systems).
  Matrix derivative_matrix(double duration) const {
    if (!has_direction()) throw ContractViolation("propagator has no coupling direction");
    const Eigen::Index n = dim();
    const Vector phases = phase_factors(duration);
    Matrix block(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      for (Eigen::Index l = 0; l < n; ++l) {
        block(k, l) = cplx(0.0, -duration) * direction_in_eigenbasis_(k, l) * divided_difference(k, l, duration, phases);
      }
    }
    return eigenvectors_ * block * eigenvectors_.adjoint();
  }

 private:
  void set_direction(const ComplexOperator& direction) {
    require_hermitian(direction, "coupling direction");
    require_same_dim(direction.dim(), dim(), "coupling direction");
    direction_in_eigenbasis_ = eigenvectors_.adjoint() * direction.matrix() * eigenvectors_;
  }

  Vector phase_factors(double duration) const {
    Vector out(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) out(k) = std::polar(1.0, -eigenvalues_(k) * duration);
    return out;
  }

  // (e^{a_k} - e^{a_l}) / (a_k - a_l) with a = -i lambda d, written as
  // e^{a_l} * (e^{iy} - 1) / (iy), y = -(lambda_k - lambda_l) d.
  cplx divided_difference(Eigen::Index k, Eigen::Index l, double duration, const Vector& phases) const {
    const double y = -(eigenvalues_(k) - eigenvalues_(l)) * duration;
    if (y == 0.0) return phases(l);
    const double half = 0.5 * y;
    const double s = std::sin(half);
    const cplx phi1(std::sin(y) / y, 2.0 * s * s / y);
    return phases(l) * phi1;
  }

  Eigen::VectorXd eigenvalues_;
  Matrix eigenvectors_;
  Matrix direction_in_eigenbasis_;
};

inline StateVector propagate(const ComplexOperator& generator, double duration, const StateVector& psi) {
  require_same_dim(generator.dim(), psi.dim(), "propagate");
  return SpectralPropagator(generator).apply(duration, psi);
}

/// phi = exp(-i d (H0 + w G)) psi and dphi = d phi / dw, both at w = 0.
inline StatePair propagate_with_derivative(const ComplexOperator& h0, const ComplexOperator& direction,
                                           double duration, const StateVector& psi) {
  require_same_dim(h0.dim(), direction.dim(), "propagate_with_derivative");
  require_same_dim(h0.dim(), psi.dim(), "propagate_with_derivative");
  const SpectralPropagator prop(h0, direction);
  auto [phi, dphi] = prop.apply_with_derivative(duration, psi.amplitudes(), Vector::Zero(psi.dim()));
  return {StateVector(std::move(phi), psi.normalized()), StateVector::unnormalized(std::move(dphi))};
}

inline cplx expectation(const ComplexOperator& a, const StateVector& psi) {
  require_same_dim(a.dim(), psi.dim(), "expectation");
  return psi.amplitudes().dot(a.matrix() * psi.amplitudes());
}

inline double variance(const ComplexOperator& a, const StateVector& psi) {
  require_same_dim(a.dim(), psi.dim(), "variance");
  require_hermitian(a, "variance observable");
  if (!psi.normalized()) throw ContractViolation("variance requires a normalized state");
  const Vector a_psi = a.matrix() * psi.amplitudes();
  const double mean = psi.amplitudes().dot(a_psi).real();
  return std::max(0.0, a_psi.squaredNorm() - mean * mean);
}

/// |<phi|psi>|^2
inline double fidelity(const StateVector& phi, const StateVector& psi) {
  require_same_dim(phi.dim(), psi.dim(), "fidelity");
  return std::norm(phi.amplitudes().dot(psi.amplitudes()));
}

}  // namespace twistsense
