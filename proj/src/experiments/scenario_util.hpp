#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "fkent/experiments.hpp"

namespace fkent::detail {

inline entanglement_report start_report(const experiment_config& c, const run_options& o) {
  entanglement_report r;
  r.config = c;
  r.threads = o.threads;
  return r;
}

inline void require_sweep(const experiment_config& c, std::string_view name) {
  if (c.sweep.name != name)
    throw error(errc::config_error, std::string(to_string(c.kind)) + " sweeps '" + std::string(name) + "', got '" +
                                        c.sweep.name + "'");
}

inline double option(const experiment_config& c, const char* key, double fallback) {
  if (!c.options.contains(key)) return fallback;
  if (!c.options[key].is_number()) throw error(errc::config_error, std::string("option '") + key + "' must be a number");
  return c.options[key].get<double>();
}

inline bool has_option(const experiment_config& c, const char* key) { return c.options.contains(key); }

inline std::vector<double> option_list(const experiment_config& c, const char* key, std::vector<double> fallback) {
  if (!c.options.contains(key)) return fallback;
  if (!c.options[key].is_array()) throw error(errc::config_error, std::string("option '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : c.options[key]) {
    if (!v.is_number()) throw error(errc::config_error, std::string("option '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

/// Grid values used as block sizes or offsets must be integers.
inline int as_int(double v, const char* what) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9) throw error(errc::config_error, std::string(what) + " must be an integer");
  return int(r);
}

/// Blocks of length l centred at c1 and c2 (1-based centres).
inline std::pair<block_selection, block_selection> block_pair(double c1, double c2, int l, int N) {
  return {centered_block(c1, l, N), centered_block(c2, l, N)};
}

inline block_selection join(block_selection a, const block_selection& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline double log_negativity_of(const mode_basis& basis, const block_selection& A, const block_selection& B) {
  return ground_state_log_negativity(basis, A, B);
}

inline double entropy_of(const mode_basis& basis, const block_selection& A) { return ground_state_entropy(basis, A); }

}  // namespace fkent::detail
