#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fkent/classical.hpp"
#include "fkent/gaussian.hpp"
#include "fkent/modes.hpp"

namespace fkent {

using json = nlohmann::json;

inline constexpr int report_schema_version = 1;

enum class scenario {
  entropy_profile,
  sliding_blocks,
  ln_vs_separation,
  alpha_fit,
  beta_fit,
  max_entropy_sweep,
  correlation_compare,
  weak_coupling_profile,
  noncritical_oscillation,
  squeeze_single,
  squeeze_double,
  wkb_check,
};

std::string_view to_string(scenario s);
scenario parse_scenario(std::string_view name);

/// Background recipe. Continuum profiles use X (default chain middle);
/// finite junctions use L, sigma and either m or H.
struct sector_config {
  sector kind = sector::vacuum;
  std::optional<double> X;
  double L = 8.0;
  std::optional<double> m;
  std::optional<double> H;
  bool relax = true;
};

struct sweep_axis {
  std::string name;
  std::vector<double> grid;
};

struct experiment_config {
  scenario kind = scenario::entropy_profile;
  chain_spec chain;
  sector_config background;
  sweep_axis sweep;
  json options = json::object();
  std::optional<std::filesystem::path> seed_solution_path;
};

/// Throws error(config_error) with the offending key.
experiment_config parse_config(const json& j);
experiment_config load_config(const std::filesystem::path& path);
/// Canonical form: every field explicit, keys sorted, grids expanded.
json to_json(const experiment_config& c);
/// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const experiment_config& c);

// -- reports -----------------------------------------------------------------

struct report_row {
  double sweep_value = 0;
  std::vector<std::pair<std::string, double>> quantities;

  double at(std::string_view name) const;
};

struct entanglement_report {
  experiment_config config;
  std::vector<report_row> rows;
  std::map<std::string, double> fits;
  std::vector<std::string> flags;
  json extra = json::object();
  double wall_seconds = 0;
  int threads = 1;

  bool flagged(std::string_view f) const;
  std::vector<double> column(std::string_view name) const;
};

json to_json(const entanglement_report& r);
/// sweep_param,value,quantity,config_hash
void write_csv(std::ostream& out, const entanglement_report& r);
/// Checks schema_version and that config_hash matches the embedded config.
entanglement_report report_from_json(const json& j);

// -- execution ---------------------------------------------------------------

/// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any job is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

struct run_options {
  int threads = 1;
};

/// Relaxed (unless disabled) background for a config, or the persisted seed solution.
classical_solution build_background(const experiment_config& c);
/// Same chain/sector, different coupling.
classical_solution build_background(const experiment_config& c, double g);

/// Site centres used to place blocks: cores for soliton sectors, the middle otherwise.
std::vector<double> block_centers(const classical_solution& s);

/// Double junction whose sampled core distance equals `distance` sites. Throws NoStableConfiguration.
classical_solution double_soliton_at_distance(const chain_spec& chain, double L, double distance);
/// Sampled core distance of the double junction with parameter m.
double sampled_core_distance(int N, double L, double m);

/// Block size maximizing E_S around a single soliton at coupling g (cached per (N, g)).
int entropy_optimal_block(int N, double g);

entanglement_report run(const experiment_config& c, const run_options& o = {});

entanglement_report run_entropy_profile(const experiment_config& c, const run_options& o);
entanglement_report run_alpha_fit(const experiment_config& c, const run_options& o);
entanglement_report run_max_entropy_sweep(const experiment_config& c, const run_options& o);
entanglement_report run_correlation_compare(const experiment_config& c, const run_options& o);
entanglement_report run_weak_coupling_profile(const experiment_config& c, const run_options& o);
entanglement_report run_sliding_blocks(const experiment_config& c, const run_options& o);
entanglement_report run_ln_vs_separation(const experiment_config& c, const run_options& o);
entanglement_report run_beta_fit(const experiment_config& c, const run_options& o);
entanglement_report run_wkb_check(const experiment_config& c, const run_options& o);
entanglement_report run_noncritical_oscillation(const experiment_config& c, const run_options& o);
entanglement_report run_squeeze_single(const experiment_config& c, const run_options& o);
entanglement_report run_squeeze_double(const experiment_config& c, const run_options& o);

// -- small numerics shared by scenarios ---------------------------------------

struct line_fit {
  double slope;
  double intercept;
  double r_squared;
  int points;
};

/// Ordinary least squares of y on x.
line_fit fit_line(const std::vector<double>& x, const std::vector<double>& y);
/// Spearman rank correlation.
double rank_correlation(const std::vector<double>& x, const std::vector<double>& y);
/// max_l E_S exceeds E_S at the last l by more than 1e-3 relative.
bool has_interior_maximum(const std::vector<double>& values);
/// Sign changes of the discrete derivative.
int derivative_sign_changes(const std::vector<double>& values);

}  // namespace fkent
