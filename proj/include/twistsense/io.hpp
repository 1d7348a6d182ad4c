#pragma once

// CSV and JSON serialization of sensitivity records and optima.

#include <charconv>
#include <optional>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "twistsense/sweep_optimize.hpp"

namespace twistsense::io {

inline constexpr const char* kCsvHeader = "scheme,n_spins,twist_times_tau,t_over_tau,sensitivity,method,engine";

/// 12 significant digits, '.' decimal separator, independent of the locale.
inline std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  if (res.ec != std::errc{}) throw Error("failed to format floating-point value");
  return std::string(buf, res.ptr);
}

inline std::string format_spins(std::optional<int> n_spins) { return n_spins ? std::to_string(*n_spins) : "inf"; }

inline void write_csv(std::ostream& os, const std::vector<SensitivityRecord>& records, Engine engine) {
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << to_string(r.scheme) << ',' << format_spins(r.n_spins) << ',' << format_real(r.twist_strength) << ','
       << format_real(r.sensing_fraction) << ',' << format_real(r.sensitivity) << ',' << to_string(r.method) << ','
       << to_string(engine) << '\n';
  }
}

inline nlohmann::json spins_json(std::optional<int> n_spins) {
  if (n_spins) return *n_spins;
  return "inf";
}

inline nlohmann::json to_json(const SensitivityRecord& r, Engine engine) {
  return {{"scheme", to_string(r.scheme)},
          {"n_spins", spins_json(r.n_spins)},
          {"twist_strength", r.twist_strength},
          {"sensing_fraction", r.sensing_fraction},
          {"sensitivity", r.sensitivity},
          {"method", to_string(r.method)},
          {"engine", to_string(engine)}};
}

inline nlohmann::json to_json(const OptimumResult& r) {
  return {{"twist_value", r.twist_value},
          {"best_sensitivity", r.best_sensitivity},
          {"t_opt", r.t_opt},
          {"boundary", to_string(r.boundary)}};
}

inline void write_json(std::ostream& os, const std::vector<SensitivityRecord>& records, Engine engine) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) arr.push_back(to_json(r, engine));
  os << arr.dump(2) << '\n';
}

}  // namespace twistsense::io
