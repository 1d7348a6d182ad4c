#pragma once

// Sensitivity curves over the sensing fraction, optimization of the sensing
// fraction, and break-even thresholds against the separable benchmark.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "twistsense/bosonic_limit.hpp"

namespace twistsense {

enum class Engine { spin, fock, closed_form };

inline std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::spin: return "spin";
    case Engine::fock: return "fock";
    case Engine::closed_form: return "closed_form";
  }
  return "?";
}

inline Engine parse_engine(std::string_view tag) {
  if (tag == "spin") return Engine::spin;
  if (tag == "fock") return Engine::fock;
  if (tag == "closed_form") return Engine::closed_form;
  throw InvalidArgument("unknown engine '" + std::string(tag) + "'");
}

inline constexpr int kDefaultGridPoints = 201;
inline constexpr double kRefineTolerance = 1e-6;
inline constexpr double kTieTolerance = 1e-12;
inline constexpr double kBreakEvenExcess = 1e-9;

/// Sensitivity as a function of the sensing fraction for one
/// (scheme, N or bosonic, twist) family on a given engine.
struct Curve {
  std::function<double(double)> evaluate;
  Method method = Method::qfi;
};

/// n_spins empty means the bosonic limit, which only the closed_form and
/// fock engines can evaluate; finite N requires the spin engine.
inline Curve make_curve(Scheme scheme, std::optional<int> n_spins, double twist, Engine engine,
                        int fock_dim = 400) {
  require_twist(twist);
  switch (engine) {
    case Engine::spin: {
      if (!n_spins) throw InvalidArgument("spin engine needs a finite spin count");
      auto eval = std::make_shared<const SpinSensitivity>(scheme, *n_spins, twist);
      return {[eval](double s) { return (*eval)(s); }, eval->method()};
    }
    case Engine::fock: {
      if (n_spins) throw InvalidArgument("fock engine evaluates the bosonic limit; use n = inf");
      auto eval = std::make_shared<const FockSensitivity>(scheme, twist, FockSpace(fock_dim));
      return {[eval](double s) { return (*eval)(s); }, eval->method()};
    }
    case Engine::closed_form: {
      if (n_spins) throw InvalidArgument("closed_form engine evaluates the bosonic limit; use n = inf");
      if (scheme == Scheme::C && twist == 0.0) {
        throw SingularParameter("scheme C closed form is singular at eta*tau = 0");
      }
      return {[scheme, twist](double s) { return closed_form(scheme, twist, s); }, Method::closed_form};
    }
  }
  throw InvalidArgument("invalid engine");
}

/// s_k = k / (points - 1), exact at both ends.
inline double grid_point(int k, int points) {
  if (k == points - 1) return 1.0;
  return static_cast<double>(k) / static_cast<double>(points - 1);
}

struct SweepSpec {
  Scheme scheme = Scheme::A;
  std::optional<int> n_spins;
  std::vector<double> twist_values;
  int t_grid = kDefaultGridPoints;
  Engine engine = Engine::spin;
  int fock_dim = 400;

  void validate() const {
    if (t_grid < 3) throw InvalidArgument("t grid needs at least 3 points");
    if (twist_values.empty()) throw InvalidArgument("at least one twist value is required");
    for (double x : twist_values) require_twist(x);
    if (n_spins && *n_spins < 1) throw InvalidDimension("spin count must be >= 1");
  }
};

/// One record per (twist, s), twist outer, s inner, both ascending in the
/// order given.
inline std::vector<SensitivityRecord> sweep_curve(const SweepSpec& spec) {
  spec.validate();
  std::vector<SensitivityRecord> out;
  out.reserve(spec.twist_values.size() * static_cast<std::size_t>(spec.t_grid));
  for (double twist : spec.twist_values) {
    const Curve curve = make_curve(spec.scheme, spec.n_spins, twist, spec.engine, spec.fock_dim);
    for (int k = 0; k < spec.t_grid; ++k) {
      const double s = grid_point(k, spec.t_grid);
      out.push_back({spec.scheme, spec.n_spins, twist, s, curve.evaluate(s), curve.method});
    }
  }
  return out;
}

enum class Boundary { interior, left_edge, right_edge };

inline std::string_view to_string(Boundary boundary) {
  switch (boundary) {
    case Boundary::interior: return "interior";
    case Boundary::left_edge: return "left_edge";
    case Boundary::right_edge: return "right_edge";
  }
  return "?";
}

struct OptimumResult {
  double twist_value = 0.0;
  double best_sensitivity = 0.0;
  double t_opt = 1.0;
  Boundary boundary = Boundary::right_edge;
  double best_grid_sensitivity = 0.0;
};

/// Golden-section search for a maximum of f on [lo, hi] down to width tol.
/// Returns the abscissa of the best point evaluated.
inline std::pair<double, double> golden_section_maximize(const std::function<double(double)>& f, double lo,
                                                         double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > tol) {
    if (fc >= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

/// Grid scan then golden-section refinement inside the bracketing cells.
/// Endpoint optima are kept as such; ties on the grid go to the larger s.
inline OptimumResult optimize_curve(const std::function<double(double)>& f, double twist,
                                    int grid_points = kDefaultGridPoints) {
  if (grid_points < 3) throw InvalidArgument("t grid needs at least 3 points");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(grid_points));
  for (int k = 0; k < grid_points; ++k) values.push_back(f(grid_point(k, grid_points)));
  const double peak = *std::max_element(values.begin(), values.end());
  int best = grid_points - 1;
  while (values[static_cast<std::size_t>(best)] < peak - kTieTolerance) --best;

  OptimumResult result;
  result.twist_value = twist;
  result.t_opt = grid_point(best, grid_points);
  result.best_sensitivity = values[static_cast<std::size_t>(best)];
  result.best_grid_sensitivity = result.best_sensitivity;

  const double lo = grid_point(std::max(best - 1, 0), grid_points);
  const double hi = grid_point(std::min(best + 1, grid_points - 1), grid_points);
  const auto [s_ref, f_ref] = golden_section_maximize(f, lo, hi, kRefineTolerance);
  if (f_ref > result.best_sensitivity + kTieTolerance) {
    result.t_opt = s_ref;
    result.best_sensitivity = f_ref;
  }

  if (result.t_opt == 0.0) {
    result.boundary = Boundary::left_edge;
  } else if (result.t_opt == 1.0) {
    result.boundary = Boundary::right_edge;
  } else {
    result.boundary = Boundary::interior;
  }
  return result;
}

inline OptimumResult optimize_t(Scheme scheme, std::optional<int> n_spins, double twist, Engine engine,
                                int fock_dim = 400) {
  const Curve curve = make_curve(scheme, n_spins, twist, engine, fock_dim);
  return optimize_curve(curve.evaluate, twist);
}

/// Smallest twist in [lo, hi] at which the optimized sensitivity beats the
/// separable benchmark (1 + 1e-9). The interval is scanned coarsely for the
/// first change of the predicate, then bisected to `tolerance`.
inline double find_threshold(Scheme scheme, std::optional<int> n_spins, Engine engine, double lo, double hi,
                             double tolerance = 1e-4, int fock_dim = 400, int scan_cells = 32) {
  if (!(lo < hi) || lo < 0.0) throw InvalidArgument("threshold search interval must satisfy 0 <= lo < hi");
  const auto beats_benchmark = [&](double twist) {
    return optimize_t(scheme, n_spins, twist, engine, fock_dim).best_sensitivity > 1.0 + kBreakEvenExcess;
  };
  if (beats_benchmark(lo)) {
    throw BracketingError("predicate already holds at the lower end " + std::to_string(lo));
  }
  double below = lo;
  std::optional<double> above;
  for (int k = 1; k <= scan_cells; ++k) {
    const double x = k == scan_cells ? hi : lo + (hi - lo) * k / scan_cells;
    if (beats_benchmark(x)) {
      above = x;
      break;
    }
    below = x;
  }
  if (!above) {
    throw BracketingError("no break-even in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  double upper = *above;
  while (upper - below > tolerance) {
    const double mid = 0.5 * (below + upper);
    if (beats_benchmark(mid)) {
      upper = mid;
    } else {
      below = mid;
    }
  }
  return 0.5 * (below + upper);
}

}  // namespace twistsense
