#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "twistsense/protocols.hpp"

using namespace twistsense;

namespace {

const Scheme kAll[] = {Scheme::A, Scheme::B, Scheme::C, Scheme::Bprime, Scheme::Cprime};
const Scheme kTwisted[] = {Scheme::B, Scheme::C, Scheme::Bprime, Scheme::Cprime};

/// d psi / d omega of the directly exponentiated protocol, by finite
/// differences in omega.
Vector pipeline_finite_difference(ProtocolConfig cfg) {
  return oracle::finite_difference([cfg](double w) mutable {
    cfg.omega = w;
    return state_at_field(cfg).amplitudes();
  });
}

}  // namespace

TEST(Hamiltonian, TatVanishesOnOneSpin) {
  const auto h = hamiltonian(DickeSpace(1), HamiltonianKind::tat, 3.7);
  EXPECT_EQ(h.matrix().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Hamiltonian, OatOnOneSpinIsGlobalPhase) {
  const double chi = 2.2;
  const auto h = hamiltonian(DickeSpace(1), HamiltonianKind::oat, chi);
  EXPECT_LE((h.matrix() - (chi / 4.0) * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Hamiltonian, FieldIsScaledJy) {
  const DickeSpace space(2);
  const auto h = hamiltonian(space, HamiltonianKind::field, 1.0);
  const auto jy = collective_operators(space).Jy;
  EXPECT_LE((h.matrix() - jy.matrix() / std::sqrt(2.0)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(h.kind(), OperatorKind::hermitian);
}

TEST(Hamiltonian, AllKindsHermitian) {
  for (int n : {2, 7, 40}) {
    for (auto kind : {HamiltonianKind::field, HamiltonianKind::tat, HamiltonianKind::oat}) {
      const auto h = hamiltonian(DickeSpace(n), kind, 1.7);
      EXPECT_TRUE(ComplexOperator::hermitian(h.matrix()));
    }
  }
}

TEST(ProtocolConfig, RejectsBadInputs) {
  EXPECT_THROW(final_state({Scheme::B, 4, 1.0, 1.2, 0.0}), InvalidArgument);
  EXPECT_THROW(final_state({Scheme::B, 4, 1.0, -0.1, 0.0}), InvalidArgument);
  EXPECT_THROW(final_state({Scheme::B, 4, -1.0, 0.5, 0.0}), InvalidArgument);
  EXPECT_THROW(final_state({Scheme::B, 0, 1.0, 0.5, 0.0}), InvalidDimension);
  EXPECT_THROW(parse_scheme("D"), InvalidArgument);
  EXPECT_EQ(parse_scheme("Cprime"), Scheme::Cprime);
  EXPECT_EQ(parse_scheme("B'"), Scheme::Bprime);
}

TEST(ProtocolConfig, TimeBudget) {
  EXPECT_DOUBLE_EQ(preparation_time(Scheme::B, 0.3), 0.7);
  EXPECT_DOUBLE_EQ(preparation_time(Scheme::C, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(preparation_time(Scheme::Bprime, 0.3), 0.35);
  EXPECT_DOUBLE_EQ(preparation_time(Scheme::Cprime, 1.0), 0.0);
}

TEST(FinalState, SchemeAAtZeroField) {
  for (int n : {1, 5, 30}) {
    const DickeSpace space(n);
    const auto st = final_state({Scheme::A, n, 0.0, 0.42, 0.0});
    const Vector psi0 = initial_state(space).amplitudes();
    EXPECT_LE((st.psi.amplitudes() - psi0).norm(), 1e-15);
    const Vector expected = cplx(0.0, -1.0) * (hamiltonian(space, HamiltonianKind::field, 1.0).matrix() * psi0);
    EXPECT_LE((st.dpsi.amplitudes() - expected).norm(), 1e-15);
  }
}

TEST(FinalState, SchemeBAtFullSensingIsSchemeA) {
  const auto a = final_state({Scheme::A, 10, 0.0, 1.0, 0.0});
  const auto b = final_state({Scheme::B, 10, 4.0, 1.0, 0.0});
  EXPECT_LE((a.psi.amplitudes() - b.psi.amplitudes()).norm(), 1e-14);
  EXPECT_LE((a.dpsi.amplitudes() - b.dpsi.amplitudes()).norm(), 1e-14);
}

TEST(FinalState, EchoCancelsAtZeroField) {
  const auto st = final_state({Scheme::Cprime, 10, 50.0, 0.37, 0.0});
  EXPECT_NEAR(std::norm(st.psi.amplitudes()(0)), 1.0, 1e-12);
  for (double chi : {0.5, 11.5, 80.0}) {
    for (double s : {0.0, 0.2, 0.8}) {
      const auto b = final_state({Scheme::Bprime, 25, chi, s, 0.0});
      EXPECT_LE((b.psi.amplitudes() - initial_state(DickeSpace(25)).amplitudes()).norm(), 1e-10);
    }
  }
}

TEST(FinalState, SchemeCDerivativeMatchesFiniteDifference) {
  const ProtocolConfig cfg{Scheme::C, 12, 2.0, 0.3, 0.0};
  const auto st = final_state(cfg);
  const Vector fd = pipeline_finite_difference(cfg);
  EXPECT_LE((st.dpsi.amplitudes() - fd).norm() / fd.norm(), 1e-6);
}

// Every scheme's analytic derivative against finite differences of the
// directly exponentiated pipeline (which never calls the derivative code).
TEST(FinalState, AllSchemesDerivativeMatchesFiniteDifference) {
  for (Scheme sc : kAll) {
    for (int n : {2, 7, 16}) {
      for (double s : {0.0, 0.45, 0.9}) {
        const double x = is_echo_scheme(sc) ? 20.0 : 1.5;
        const ProtocolConfig cfg{sc, n, x, s, 0.0};
        const auto st = final_state(cfg);
        const Vector fd = pipeline_finite_difference(cfg);
        EXPECT_LE((st.dpsi.amplitudes() - fd).norm() / std::max(fd.norm(), 1e-12), 1e-6)
            << to_string(sc) << " N=" << n << " s=" << s;
        EXPECT_LE(std::abs(st.psi.amplitudes().dot(st.dpsi.amplitudes()).real()), 1e-8);
      }
    }
  }
}

TEST(FinalState, NonzeroOmegaUsesFieldState) {
  const ProtocolConfig cfg{Scheme::C, 6, 1.0, 0.4, 0.3};
  const auto st = final_state(cfg);
  EXPECT_NEAR(st.psi.norm(), 1.0, 1e-10);
  EXPECT_LT(fidelity(st.psi, final_state({Scheme::C, 6, 1.0, 0.4, 0.0}).psi), 1.0 - 1e-6);
}

TEST(Invariants, ReductionAtFullSensing) {
  for (int n : {1, 2, 10, 50}) {
    const auto a = final_state({Scheme::A, n, 0.0, 1.0, 0.0});
    for (Scheme sc : {Scheme::B, Scheme::C}) {
      for (double x : {0.1, 1.0, 6.0}) {
        const auto st = final_state({sc, n, x, 1.0, 0.0});
        EXPECT_GE(fidelity(a.psi, st.psi), 1.0 - 1e-10);
      }
    }
  }
}

TEST(Invariants, ZeroStrengthReducesToA) {
  for (int n : {1, 2, 10, 50}) {
    const auto a = final_state({Scheme::A, n, 0.0, 1.0, 0.0});
    for (Scheme sc : kTwisted) {
      for (double s : {0.0, 0.25, 0.6, 1.0}) {
        EXPECT_GE(fidelity(a.psi, final_state({sc, n, 0.0, s, 0.0}).psi), 1.0 - 1e-10);
      }
    }
  }
}

TEST(Invariants, SingleSpinDegeneracy) {
  const auto a = final_state({Scheme::A, 1, 0.0, 1.0, 0.0});
  for (Scheme sc : kTwisted) {
    for (double s : {0.0, 0.5, 1.0}) {
      for (double w : {0.0, 0.8}) {
        const auto st = final_state({sc, 1, 5.0, s, w});
        auto a_w = state_at_field({Scheme::A, 1, 0.0, 1.0, w});
        // at omega != 0 scheme X senses for s plus whatever part of t' has the
        // field on; the twisting itself acts trivially for one spin.
        const double exposure = is_concurrent_scheme(sc) ? 1.0 : s;
        a_w = propagate(hamiltonian(DickeSpace(1), HamiltonianKind::field, w), exposure, initial_state(DickeSpace(1)));
        EXPECT_GE(fidelity(a_w, st.psi), 1.0 - 1e-10) << to_string(sc);
      }
      EXPECT_GE(fidelity(a.psi, final_state({sc, 1, 5.0, s, 0.0}).psi), 1.0 - 1e-10);
    }
  }
}

// Same dimensionless triple, different (strength, tau): the states agree.
TEST(Invariants, DimensionlessParametrization) {
  const auto explicit_state = [](Scheme sc, int n, double strength, double tau, double t, double w) {
    const DickeSpace space(n);
    const double prep = is_echo_scheme(sc) ? 0.5 * (tau - t) : tau - t;
    const auto twist = hamiltonian(space, is_echo_scheme(sc) ? HamiltonianKind::oat : HamiltonianKind::tat, strength);
    const auto field = hamiltonian(space, HamiltonianKind::field, w);
    // omega is scaled by 1/tau so that omega*tau is held fixed as well
    const auto both = [&](double sign) {
      return ComplexOperator(sign * twist.matrix() + field.matrix(), OperatorKind::hermitian);
    };
    const StateVector psi0 = initial_state(space);
    switch (sc) {
      case Scheme::B: return propagate(field, t, propagate(twist, prep, psi0));
      case Scheme::C: return propagate(field, t, propagate(both(1.0), prep, psi0));
      case Scheme::Bprime: return propagate(twist, -prep, propagate(field, t, propagate(twist, prep, psi0)));
      case Scheme::Cprime: return propagate(both(-1.0), prep, propagate(field, t, propagate(both(1.0), prep, psi0)));
      default: return propagate(field, tau, psi0);
    }
  };
  for (Scheme sc : kTwisted) {
    const int n = 9;
    const double strength = 1.1, tau = 1.6, frac = 0.3, w_tau = 0.7;
    const auto lhs = explicit_state(sc, n, strength, tau, frac * tau, w_tau / tau);
    const auto rhs = explicit_state(sc, n, 2.0 * strength, 0.5 * tau, frac * 0.5 * tau, w_tau / (0.5 * tau));
    const auto unit = final_state({sc, n, strength * tau, frac, w_tau});
    EXPECT_GE(fidelity(lhs, rhs), 1.0 - 1e-10) << to_string(sc);
    EXPECT_GE(fidelity(lhs, unit.psi), 1.0 - 1e-10) << to_string(sc);
  }
}

TEST(ProtocolEvaluator, ReusesDecompositionAcrossFractions) {
  const ProtocolEvaluator eval(Scheme::Cprime, 8, 12.0);
  for (double s : {0.0, 0.33, 0.91}) {
    const auto a = eval.at(s);
    const auto b = final_state({Scheme::Cprime, 8, 12.0, s, 0.0});
    EXPECT_LE((a.dpsi.amplitudes() - b.dpsi.amplitudes()).norm(), 1e-13);
  }
}
