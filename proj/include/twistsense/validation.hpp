#pragma once

// Invariant suite behind `twistsense validate`: one named check per
// documented property of the library, each returning pass/fail and a short
// diagnostic.

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "twistsense/finite_difference.hpp"
#include "twistsense/sweep_optimize.hpp"

namespace twistsense::validation {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Check {
  std::string name;
  std::function<Outcome()> run;
};

namespace detail {

inline Outcome verdict(bool ok, double worst, const std::string& what) {
  std::ostringstream os;
  os << what << " = " << worst;
  return {ok, os.str()};
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline ComplexOperator random_hermitian(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  Matrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = cplx(g(rng), g(rng));
  return {0.5 * (m + m.adjoint()), OperatorKind::hermitian};
}

inline StateVector random_state(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = cplx(g(rng), g(rng));
  return {v / v.norm(), true};
}

/// Final state built with explicit eta, tau (no tau = 1 normalization).
inline StateVector explicit_time_state(Scheme scheme, int n, double strength, double tau, double t) {
  const DickeSpace space(n);
  const double prep = is_echo_scheme(scheme) ? 0.5 * (tau - t) : tau - t;
  const auto twist = hamiltonian(space, twist_kind(scheme), strength);
  const StateVector psi0 = initial_state(space);
  switch (scheme) {
    case Scheme::A: return psi0;
    case Scheme::B:
    case Scheme::C: return propagate(twist, prep, psi0);
    case Scheme::Bprime:
    case Scheme::Cprime: return propagate(twist, -prep, propagate(twist, prep, psi0));
  }
  return psi0;
}

}  // namespace detail

inline std::vector<Check> spin_core_checks() {
  std::vector<Check> out;
  out.push_back({"spin_core: su(2) commutators N=1..50", [] {
                   double worst = 0.0;
                   for (int n = 1; n <= 50; ++n) {
                     const auto o = collective_operators(DickeSpace(n));
                     const cplx i(0.0, 1.0);
                     const Matrix &x = o.Jx.matrix(), &y = o.Jy.matrix(), &z = o.Jz.matrix();
                     worst = std::max({worst, (detail::commutator(x, y) - i * z).cwiseAbs().maxCoeff(),
                                       (detail::commutator(y, z) - i * x).cwiseAbs().maxCoeff(),
                                       (detail::commutator(z, x) - i * y).cwiseAbs().maxCoeff()});
                   }
                   return detail::verdict(worst <= 1e-12, worst, "max commutator defect");
                 }});
  out.push_back({"spin_core: Casimir N=1..50", [] {
                   double worst = 0.0;
                   for (int n = 1; n <= 50; ++n) {
                     const DickeSpace space(n);
                     const auto o = collective_operators(space);
                     const Matrix c = o.Jx.matrix() * o.Jx.matrix() + o.Jy.matrix() * o.Jy.matrix() +
                                      o.Jz.matrix() * o.Jz.matrix();
                     const double j = space.j();
                     worst = std::max(worst,
                                      (c - j * (j + 1.0) * Matrix::Identity(space.dim(), space.dim())).cwiseAbs().maxCoeff());
                   }
                   return detail::verdict(worst <= 1e-10, worst, "max Casimir defect");
                 }});
  out.push_back({"spin_core: propagator unitarity and composition", [] {
                   std::mt19937_64 rng(7);
                   double worst_norm = 0.0, worst_comp = 0.0;
                   for (int trial = 0; trial < 20; ++trial) {
                     const Eigen::Index dim = 2 + trial % 15;
                     const auto h = detail::random_hermitian(rng, dim);
                     const auto psi = detail::random_state(rng, dim);
                     const double t1 = 0.1 * trial + 0.3, t2 = 0.7;
                     const auto once = propagate(h, t1 + t2, psi);
                     const auto twice = propagate(h, t2, propagate(h, t1, psi));
                     worst_norm = std::max(worst_norm, std::abs(once.norm() - 1.0));
                     worst_comp = std::max(worst_comp, (once.amplitudes() - twice.amplitudes()).cwiseAbs().maxCoeff());
                   }
                   return detail::verdict(worst_norm <= 1e-10 && worst_comp <= 1e-9, std::max(worst_norm, worst_comp),
                                          "worst norm/composition defect");
                 }});
  out.push_back({"spin_core: derivative vs Richardson finite difference (N<=20)", [] {
                   std::mt19937_64 rng(11);
                   std::uniform_int_distribution<int> pick_n(1, 20);
                   std::uniform_real_distribution<double> pick_t(0.1, 2.0);
                   double worst = 0.0;
                   for (int trial = 0; trial < 20; ++trial) {
                     const int n = pick_n(rng);
                     const Eigen::Index dim = n + 1;
                     const auto h0 = detail::random_hermitian(rng, dim);
                     const auto g = detail::random_hermitian(rng, dim);
                     const auto psi = detail::random_state(rng, dim);
                     const double d = pick_t(rng);
                     const auto exact = propagate_with_derivative(h0, g, d, psi);
                     const Vector fd = richardson_derivative([&](double w) {
                       return propagate(ComplexOperator(h0.matrix() + w * g.matrix(), OperatorKind::hermitian), d, psi)
                           .amplitudes();
                     });
                     worst = std::max(worst, relative_norm_error(exact.derivative.amplitudes(), fd));
                   }
                   return detail::verdict(worst <= 1e-6, worst, "worst relative error");
                 }});
  return out;
}

inline std::vector<Check> protocol_checks() {
  std::vector<Check> out;
  out.push_back({"protocols: B and C at t/tau=1 reduce to A", [] {
                   double worst = 0.0;
                   for (int n : {1, 2, 10, 50}) {
                     for (double x : {0.4, 4.0}) {
                       for (Scheme sc : {Scheme::B, Scheme::C}) {
                         const auto a = final_state({Scheme::A, n, 0.0, 1.0, 0.0});
                         const auto b = final_state({sc, n, x, 1.0, 0.0});
                         worst = std::max({worst, 1.0 - fidelity(a.psi, b.psi),
                                           (a.dpsi.amplitudes() - b.dpsi.amplitudes()).norm()});
                       }
                     }
                   }
                   return detail::verdict(worst <= 1e-10, worst, "worst defect");
                 }});
  out.push_back({"protocols: zero twist reduces to A for every t/tau", [] {
                   double worst = 0.0;
                   for (int n : {1, 2, 10, 50}) {
                     for (Scheme sc : {Scheme::B, Scheme::C, Scheme::Bprime, Scheme::Cprime}) {
                       for (double s : {0.0, 0.3, 0.7, 1.0}) {
                         const auto a = final_state({Scheme::A, n, 0.0, 1.0, 0.0});
                         const auto b = final_state({sc, n, 0.0, s, 0.0});
                         worst = std::max(worst, 1.0 - fidelity(a.psi, b.psi));
                       }
                     }
                   }
                   return detail::verdict(worst <= 1e-10, worst, "worst infidelity");
                 }});
  out.push_back({"protocols: N=1 degeneracy", [] {
                   double worst = 0.0;
                   for (Scheme sc : {Scheme::B, Scheme::C, Scheme::Bprime, Scheme::Cprime}) {
                     for (double s : {0.0, 0.5, 1.0}) {
                       const auto st = final_state({sc, 1, 3.0, s, 0.0});
                       worst = std::max(worst, 1.0 - fidelity(st.psi, initial_state(DickeSpace(1))));
                     }
                   }
                   return detail::verdict(worst <= 1e-10, worst, "worst infidelity");
                 }});
  out.push_back({"protocols: echo cancels at zero field", [] {
                   double worst = 0.0;
                   for (int n : {2, 10, 30}) {
                     for (double chi : {1.0, 11.5, 50.0}) {
                       for (double s : {0.0, 0.4, 0.9}) {
                         const auto st = final_state({Scheme::Bprime, n, chi, s, 0.0});
                         worst = std::max(worst, (st.psi.amplitudes() - initial_state(DickeSpace(n)).amplitudes()).norm());
                       }
                     }
                   }
                   return detail::verdict(worst <= 1e-10, worst, "worst deviation from |down>");
                 }});
  out.push_back({"protocols: dimensionless parametrization", [] {
                   double worst = 0.0;
                   for (Scheme sc : {Scheme::B, Scheme::C, Scheme::Bprime, Scheme::Cprime}) {
                     const double strength = 1.3, tau = 2.0, frac = 0.35;
                     const auto lhs = detail::explicit_time_state(sc, 8, strength, tau, frac * tau);
                     const auto rhs = detail::explicit_time_state(sc, 8, 2.0 * strength, 0.5 * tau, frac * 0.5 * tau);
                     const auto unit = final_state({sc, 8, strength * tau, frac, 0.0});
                     worst = std::max({worst, 1.0 - fidelity(lhs, rhs), 1.0 - fidelity(lhs, unit.psi)});
                   }
                   return detail::verdict(worst <= 1e-10, worst, "worst infidelity");
                 }});
  return out;
}

inline std::vector<Check> metrology_checks() {
  std::vector<Check> out;
  out.push_back({"metrology: benchmark sqrt(F)/tau = 1 for A, N=1..100", [] {
                   double worst = 0.0;
                   for (int n = 1; n <= 100; ++n) {
                     worst = std::max(worst, std::abs(qfi_sensitivity({Scheme::A, n, 0.0, 1.0, 0.0}).sensitivity - 1.0));
                   }
                   return detail::verdict(worst <= 1e-9, worst, "max deviation");
                 }});
  out.push_back({"metrology: QFI nonnegative and below 4<dpsi|dpsi>", [] {
                   bool ok = true;
                   double worst = 0.0;
                   for (Scheme sc : {Scheme::A, Scheme::B, Scheme::C}) {
                     for (int n : {2, 10, 40}) {
                       for (double x : {0.4, 2.0}) {
                         for (double s : {0.0, 0.25, 0.5, 1.0}) {
                           const auto st = final_state({sc, n, x, s, 0.0});
                           const double f = qfi(st);
                           const double bound = 4.0 * st.dpsi.amplitudes().squaredNorm();
                           ok = ok && f >= 0.0 && f <= bound * (1.0 + 1e-12);
                           worst = std::max(worst, f - bound);
                         }
                       }
                     }
                   }
                   return detail::verdict(ok, worst, "max F - 4<dpsi|dpsi>");
                 }});
  out.push_back({"metrology: echo B' equals the closed form", [] {
                   double worst = 0.0;
                   for (int n : {2, 5, 10, 50}) {
                     for (double chi : {1.0, 4.0, 11.5, 50.0}) {
                       for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                         const double num = echo_sensitivity({Scheme::Bprime, n, chi, s, 0.0}).sensitivity;
                         worst = std::max(worst, relative_difference(num, closed_form_Bprime(n, chi, s)));
                       }
                     }
                   }
                   return detail::verdict(worst <= 1e-6, worst, "worst relative difference");
                 }});
  out.push_back({"metrology: echo J_y spread is sqrt(N)/2", [] {
                   double worst = 0.0;
                   for (Scheme sc : {Scheme::Bprime, Scheme::Cprime}) {
                     for (int n : {2, 5, 10, 50}) {
                       for (double chi : {1.0, 4.0, 11.5, 50.0}) {
                         for (double s : {0.1, 0.5, 0.9}) {
                           const auto st = final_state({sc, n, chi, s, 0.0});
                           const auto jy = collective_operators(DickeSpace(n)).Jy;
                           worst = std::max(worst, std::abs(std::sqrt(variance(jy, st.psi)) - 0.5 * std::sqrt(n)));
                         }
                       }
                     }
                   }
                   return detail::verdict(worst <= 1e-9, worst, "max deviation");
                 }});
  out.push_back({"metrology: scheme B converges monotonically to the bosonic limit", [] {
                   const double limit = closed_form(Scheme::B, 1.0, 0.5);
                   double previous = 1e300;
                   bool ok = true;
                   double last = 0.0;
                   for (int n : {50, 100, 200, 500}) {
                     last = std::abs(qfi_sensitivity({Scheme::B, n, 1.0, 0.5, 0.0}).sensitivity - limit);
                     ok = ok && last < previous;
                     previous = last;
                   }
                   return detail::verdict(ok, last, "error at N=500");
                 }});
  out.push_back({"metrology: generating-function moment vs dense matrices", [] {
                   double worst = 0.0;
                   for (int n = 2; n <= 20; ++n) {
                     for (double phase : {0.1, 0.3, 1.0}) {
                       const cplx a = moment_oracle(n, phase), b = moment_direct(n, phase);
                       worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
                     }
                   }
                   return detail::verdict(worst <= 1e-10, worst, "worst relative difference");
                 }});
  return out;
}

inline std::vector<Check> bosonic_checks() {
  std::vector<Check> out;
  out.push_back({"bosonic_limit: optimum branch continuity at eta*tau = 0.5", [] {
                   const double below = closed_form_optimum(Scheme::B, 0.5).value;
                   const double above = std::exp(2.0 * 0.5 - 1.0) / (2.0 * 0.5);
                   const double worst = std::max(std::abs(below - 1.0), std::abs(above - 1.0));
                   return detail::verdict(worst <= 1e-12, worst, "branch gap");
                 }});
  out.push_back({"bosonic_limit: enhancement ratio >= 1 on a log grid", [] {
                   double lowest = 1e300;
                   for (int k = 0; k <= 200; ++k) {
                     const double x = 1e-3 * std::pow(1e4, k / 200.0);
                     lowest = std::min(lowest, enhancement_ratio(x));
                   }
                   return detail::verdict(lowest >= 1.0, lowest, "minimum ratio");
                 }});
  out.push_back({"bosonic_limit: B and C limits equal 1 at t/tau = 1", [] {
                   double worst = 0.0;
                   for (double x : {0.01, 0.5, 1.0, 3.0, 10.0}) {
                     worst = std::max({worst, std::abs(closed_form(Scheme::B, x, 1.0) - 1.0),
                                       std::abs(closed_form(Scheme::C, x, 1.0) - 1.0)});
                   }
                   return detail::verdict(worst <= 1e-12, worst, "max deviation");
                 }});
  out.push_back({"bosonic_limit: closed-form optima match a dense grid", [] {
                   double worst = 0.0;
                   for (Scheme sc : {Scheme::B, Scheme::C, Scheme::Bprime, Scheme::Cprime}) {
                     for (double x : {0.3, 0.5, 1.0, 2.0, 8.0}) {
                       double grid_best = 0.0;
                       for (int k = 0; k <= 100000; ++k) grid_best = std::max(grid_best, closed_form(sc, x, k / 100000.0));
                       worst = std::max(worst, relative_difference(closed_form_optimum(sc, x).value, grid_best));
                     }
                   }
                   return detail::verdict(worst <= 1e-9, worst, "worst relative difference");
                 }});
  out.push_back({"bosonic_limit: Fock / closed form / large-N spin triangle", [] {
                   const FockSpace fock(400);
                   struct Point {
                     Scheme scheme;
                     double x, s;
                   };
                   double worst_fock = 0.0, worst_spin = 0.0;
                   for (const Point& p : {Point{Scheme::B, 1.0, 0.5}, Point{Scheme::C, 1.0, 0.2},
                                          Point{Scheme::Bprime, 8.0, 0.5}, Point{Scheme::Cprime, 8.0, 0.5}}) {
                     const double cf = closed_form(p.scheme, p.x, p.s);
                     const double fk = fock_simulate(p.scheme, p.x, p.s, fock).sensitivity;
                     const double sp = sensitivity({p.scheme, 400, p.x, p.s, 0.0}).sensitivity;
                     worst_fock = std::max(worst_fock, relative_difference(fk, cf));
                     worst_spin = std::max(worst_spin, relative_difference(sp, cf));
                   }
                   return detail::verdict(worst_fock <= 1e-4 && worst_spin <= 0.05, std::max(worst_fock, worst_spin),
                                          "worst relative difference (fock 1e-4, spin N=400 5%)");
                 }});
  return out;
}

inline std::vector<Check> sweep_checks() {
  std::vector<Check> out;
  out.push_back({"sweep_optimize: refinement never below the best grid sample", [] {
                   bool ok = true;
                   double worst = 0.0;
                   for (Scheme sc : {Scheme::B, Scheme::C, Scheme::Bprime, Scheme::Cprime}) {
                     for (double x : {0.4, 4.0, 20.0}) {
                       const auto r = optimize_t(sc, 10, x, Engine::spin);
                       ok = ok && r.best_sensitivity >= r.best_grid_sensitivity;
                       worst = std::min(worst, r.best_sensitivity - r.best_grid_sensitivity);
                     }
                   }
                   return detail::verdict(ok, worst, "min (refined - grid)");
                 }});
  out.push_back({"sweep_optimize: optimized C >= optimized B >= 1, C > 1", [] {
                   bool ok = true;
                   double margin = 1e300;
                   for (int n : {2, 5, 10, 30}) {
                     for (double x : {0.1, 0.4, 1.0, 4.0}) {
                       const double b = optimize_t(Scheme::B, n, x, Engine::spin).best_sensitivity;
                       const double c = optimize_t(Scheme::C, n, x, Engine::spin).best_sensitivity;
                       ok = ok && c >= b - 1e-9 && b >= 1.0 - 1e-9 && c > 1.0;
                       margin = std::min(margin, c - b);
                     }
                   }
                   return detail::verdict(ok, margin, "min (C - B)");
                 }});
  out.push_back({"sweep_optimize: B' threshold decreases with N towards 8", [] {
                   const double t10 = find_threshold(Scheme::Bprime, 10, Engine::spin, 1.0, 30.0);
                   const double t100 = find_threshold(Scheme::Bprime, 100, Engine::spin, 1.0, 30.0);
                   const double tinf = find_threshold(Scheme::Bprime, std::nullopt, Engine::closed_form, 1.0, 30.0);
                   const bool ok = t10 > t100 && t100 > tinf && std::abs(tinf - 8.0) <= 1e-3;
                   return detail::verdict(ok, t100, "threshold at N=100");
                 }});
  out.push_back({"sweep_optimize: finite-N optimum of B approaches the limit", [] {
                   double worst = 0.0;
                   for (double x : {0.75, 1.0}) {
                     const double spin = optimize_t(Scheme::B, 500, x, Engine::spin).t_opt;
                     worst = std::max(worst, std::abs(spin - closed_form_optimum(Scheme::B, x).t_opt));
                   }
                   return detail::verdict(worst <= 0.05, worst, "max |t_opt difference|");
                 }});
  return out;
}

inline std::vector<Check> all_checks() {
  std::vector<Check> out;
  for (auto group : {spin_core_checks(), protocol_checks(), metrology_checks(), bosonic_checks(), sweep_checks()}) {
    for (auto& c : group) out.push_back(std::move(c));
  }
  return out;
}

}  // namespace twistsense::validation
