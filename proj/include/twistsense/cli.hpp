#pragma once

// Command-line front end. Exit codes: 0 success, 1 computation error,
// 2 usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistsense/io.hpp"
#include "twistsense/validation.hpp"

namespace twistsense::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// "inf" (bosonic limit) or a positive integer.
inline std::optional<int> parse_spins(const std::string& text) {
  if (text == "inf") return std::nullopt;
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidDimension("spin count must be a positive integer or 'inf', got '" + text + "'");
  }
  if (used != text.size()) throw InvalidDimension("spin count must be a positive integer or 'inf', got '" + text + "'");
  return DickeSpace::from_real(value).n_spins();
}

/// With no explicit engine, finite N uses the spin engine and "inf" the
/// closed forms.
inline Engine resolve_engine(const std::string& engine_tag, std::optional<int> n_spins) {
  if (engine_tag.empty()) return n_spins ? Engine::spin : Engine::closed_form;
  const Engine engine = parse_engine(engine_tag);
  if (!n_spins && engine == Engine::spin) throw InvalidArgument("n = inf needs engine closed_form or fock");
  if (n_spins && engine != Engine::spin) throw InvalidArgument("finite n needs the spin engine");
  return engine;
}

class Output {
 public:
  explicit Output(const std::string& path) : path_(path) {}

  /// Writes the whole payload at once; stdout when no path was given.
  void write(const std::string& payload) const {
    if (path_.empty()) {
      std::cout << payload;
      return;
    }
    std::ofstream file(path_, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot open output file '" + path_ + "'");
    file << payload;
    if (!file.flush()) throw Error("failed writing output file '" + path_ + "'");
  }

 private:
  std::string path_;
};

struct CommonArgs {
  std::string scheme;
  std::string n_spins = "10";
  std::string engine;
  std::string out;
  std::string format;
  int fock_dim = 400;
};

inline int run(const std::vector<std::string>& args, std::ostream& err = std::cerr) {
  CLI::App app{"Time-budgeted twisted-spin magnetometry: sensitivity curves, optima, thresholds and oracles",
               "twistsense"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  CommonArgs sweep_args;
  std::vector<double> sweep_twists;
  int t_points = kDefaultGridPoints;
  auto* sweep = app.add_subcommand("sweep", "sensitivity versus t/tau for one or more twist values");
  sweep->add_option("--scheme", sweep_args.scheme, "A, B, C, Bprime or Cprime")->required();
  sweep->add_option("--n", sweep_args.n_spins, "spin count or 'inf'");
  sweep->add_option("--twist", sweep_twists, "eta*tau or chi*tau (comma separated list)")->delimiter(',');
  sweep->add_option("--t-points", t_points, "grid points on [0, 1]");
  sweep->add_option("--engine", sweep_args.engine, "spin, fock or closed_form");
  sweep->add_option("--fock-dim", sweep_args.fock_dim, "Fock truncation");
  sweep->add_option("--out", sweep_args.out, "output path (stdout if omitted)");
  sweep->add_option("--format", sweep_args.format, "csv (default) or json");

  CommonArgs opt_args;
  std::vector<double> opt_twists;
  auto* optimize = app.add_subcommand("optimize", "optimal t/tau and sensitivity for each twist value");
  optimize->add_option("--scheme", opt_args.scheme)->required();
  optimize->add_option("--n", opt_args.n_spins);
  optimize->add_option("--twist", opt_twists)->delimiter(',')->required();
  optimize->add_option("--engine", opt_args.engine);
  optimize->add_option("--fock-dim", opt_args.fock_dim);
  optimize->add_option("--out", opt_args.out);
  optimize->add_option("--format", opt_args.format, "json (default) or csv");

  CommonArgs thr_args;
  double lo = 0.0, hi = 30.0, tol = 1e-4;
  auto* threshold = app.add_subcommand("threshold", "smallest twist whose optimum beats scheme A");
  threshold->add_option("--scheme", thr_args.scheme)->required();
  threshold->add_option("--n", thr_args.n_spins);
  threshold->add_option("--engine", thr_args.engine);
  threshold->add_option("--lo", lo, "search interval lower end");
  threshold->add_option("--hi", hi, "search interval upper end");
  threshold->add_option("--tol", tol, "absolute tolerance in the twist");
  threshold->add_option("--fock-dim", thr_args.fock_dim);
  threshold->add_option("--out", thr_args.out);

  std::string oracle_scheme, oracle_n;
  double oracle_twist = 0.0, oracle_t = -1.0, phase = 0.0;
  bool want_optimum = false, want_ratio = false, want_moment = false;
  std::string oracle_out;
  auto* oracle = app.add_subcommand("oracle", "closed-form values (bosonic limit, B' at finite N, moments)");
  oracle->add_option("--scheme", oracle_scheme);
  oracle->add_option("--n", oracle_n, "finite N (B' closed form, moment)");
  oracle->add_option("--twist", oracle_twist);
  oracle->add_option("--t", oracle_t, "sensing fraction t/tau");
  oracle->add_flag("--optimum", want_optimum, "optimum over t/tau");
  oracle->add_flag("--ratio", want_ratio, "optimized C / optimized B in the bosonic limit");
  oracle->add_flag("--moment", want_moment, "<+|J-^2 exp(-2i phase Jz)|+> closed form and dense value");
  oracle->add_option("--phase", phase);
  oracle->add_option("--out", oracle_out);

  auto* validate = app.add_subcommand("validate", "run the invariant suite");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*sweep) {
      const auto n = parse_spins(sweep_args.n_spins);
      SweepSpec spec;
      spec.scheme = parse_scheme(sweep_args.scheme);
      spec.n_spins = n;
      spec.engine = resolve_engine(sweep_args.engine, n);
      spec.twist_values = sweep_twists.empty() ? std::vector<double>{0.0} : sweep_twists;
      spec.t_grid = t_points;
      spec.fock_dim = sweep_args.fock_dim;
      const std::string format = sweep_args.format.empty() ? "csv" : sweep_args.format;
      if (format != "csv" && format != "json") throw InvalidArgument("format must be csv or json");
      spec.validate();
      const auto records = sweep_curve(spec);
      std::ostringstream os;
      if (format == "csv") {
        io::write_csv(os, records, spec.engine);
      } else {
        io::write_json(os, records, spec.engine);
      }
      Output(sweep_args.out).write(os.str());
      return kExitOk;
    }

    if (*optimize) {
      const auto n = parse_spins(opt_args.n_spins);
      const Scheme scheme = parse_scheme(opt_args.scheme);
      const Engine engine = resolve_engine(opt_args.engine, n);
      const std::string format = opt_args.format.empty() ? "json" : opt_args.format;
      if (format != "csv" && format != "json") throw InvalidArgument("format must be csv or json");
      std::ostringstream os;
      nlohmann::json arr = nlohmann::json::array();
      if (format == "csv") os << "scheme,n_spins,twist_times_tau,best_sensitivity,t_opt,boundary,engine\n";
      for (double x : opt_twists) {
        const auto r = optimize_t(scheme, n, x, engine, opt_args.fock_dim);
        if (format == "csv") {
          os << to_string(scheme) << ',' << io::format_spins(n) << ',' << io::format_real(x) << ','
             << io::format_real(r.best_sensitivity) << ',' << io::format_real(r.t_opt) << ',' << to_string(r.boundary)
             << ',' << to_string(engine) << '\n';
        } else {
          auto j = io::to_json(r);
          j["scheme"] = to_string(scheme);
          j["n_spins"] = io::spins_json(n);
          j["engine"] = to_string(engine);
          arr.push_back(j);
        }
      }
      if (format == "json") os << arr.dump(2) << '\n';
      Output(opt_args.out).write(os.str());
      return kExitOk;
    }

    if (*threshold) {
      const auto n = parse_spins(thr_args.n_spins);
      const Scheme scheme = parse_scheme(thr_args.scheme);
      const Engine engine = resolve_engine(thr_args.engine, n);
      const double value = find_threshold(scheme, n, engine, lo, hi, tol, thr_args.fock_dim);
      const nlohmann::json j = {{"scheme", to_string(scheme)},
                                {"n_spins", io::spins_json(n)},
                                {"engine", to_string(engine)},
                                {"threshold", value}};
      Output(thr_args.out).write(j.dump(2) + "\n");
      return kExitOk;
    }

    if (*oracle) {
      nlohmann::json j;
      if (want_moment) {
        const auto n = parse_spins(oracle_n.empty() ? "2" : oracle_n);
        if (!n) throw InvalidArgument("moment oracle needs finite n");
        const cplx closed = moment_oracle(*n, phase);
        const cplx dense = moment_direct(*n, phase);
        j = {{"n_spins", *n},       {"phase", phase},         {"closed_form_re", closed.real()},
             {"closed_form_im", closed.imag()}, {"dense_re", dense.real()}, {"dense_im", dense.imag()}};
      } else if (want_ratio) {
        j = {{"eta_tau", oracle_twist}, {"value", enhancement_ratio(oracle_twist)}};
      } else {
        if (oracle_scheme.empty()) throw InvalidArgument("oracle needs --scheme, --ratio or --moment");
        const Scheme scheme = parse_scheme(oracle_scheme);
        const auto n = oracle_n.empty() ? std::nullopt : parse_spins(oracle_n);
        if (want_optimum) {
          if (n) throw InvalidArgument("closed-form optima exist only for n = inf");
          const auto opt = closed_form_optimum(scheme, oracle_twist);
          j = {{"scheme", to_string(scheme)}, {"twist_times_tau", oracle_twist}, {"value", opt.value},
               {"t_opt", opt.t_opt}};
        } else {
          if (oracle_t < 0.0) throw InvalidArgument("oracle needs --t or --optimum");
          double value = 0.0;
          if (n) {
            if (scheme != Scheme::Bprime) throw InvalidArgument("finite-n closed form exists only for Bprime");
            value = closed_form_Bprime(*n, oracle_twist, oracle_t);
          } else {
            value = closed_form(scheme, oracle_twist, oracle_t);
          }
          j = {{"scheme", to_string(scheme)},
               {"n_spins", io::spins_json(n)},
               {"twist_times_tau", oracle_twist},
               {"t_over_tau", oracle_t},
               {"value", value}};
        }
      }
      Output(oracle_out).write(j.dump(2) + "\n");
      return kExitOk;
    }

    if (*validate) {
      bool all = true;
      for (const auto& check : validation::all_checks()) {
        validation::Outcome outcome;
        try {
          outcome = check.run();
        } catch (const std::exception& e) {
          outcome = {false, std::string("threw: ") + e.what()};
        }
        all = all && outcome.passed;
        std::cout << (outcome.passed ? "PASS  " : "FAIL  ") << check.name << "  (" << outcome.detail << ")\n";
      }
      std::cout << (all ? "all invariants hold\n" : "invariant failures\n");
      return all ? kExitOk : kExitComputation;
    }
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitComputation;
  }
  return kExitUsage;
}

}  // namespace twistsense::cli
