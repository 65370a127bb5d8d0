#include <cmath>
#include <cstdio>
#include <fstream>

#include "fkent/experiments.hpp"

namespace fkent {

namespace {

constexpr std::pair<scenario, std::string_view> scenario_names[] = {
    {scenario::entropy_profile, "entropy_profile"},
    {scenario::sliding_blocks, "sliding_blocks"},
    {scenario::ln_vs_separation, "ln_vs_separation"},
    {scenario::alpha_fit, "alpha_fit"},
    {scenario::beta_fit, "beta_fit"},
    {scenario::max_entropy_sweep, "max_entropy_sweep"},
    {scenario::correlation_compare, "correlation_compare"},
    {scenario::weak_coupling_profile, "weak_coupling_profile"},
    {scenario::noncritical_oscillation, "noncritical_oscillation"},
    {scenario::squeeze_single, "squeeze_single"},
    {scenario::squeeze_double, "squeeze_double"},
    {scenario::wkb_check, "wkb_check"},
};

[[noreturn]] void bad(const std::string& what) { throw error(errc::config_error, what); }

const json& require(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing '") + key + "' in " + where);
  return j.at(key);
}

double number(const json& j, const char* key) {
  if (!j.is_number()) bad(std::string("'") + key + "' must be a number");
  return j.get<double>();
}

std::vector<double> expand_grid(const json& s) {
  std::vector<double> grid;
  if (s.contains("grid")) {
    if (!s["grid"].is_array()) bad("'sweep.grid' must be an array");
    for (const auto& v : s["grid"]) grid.push_back(number(v, "sweep.grid[]"));
  } else if (s.contains("linear")) {
    const auto& lin = s["linear"];
    const double start = number(require(lin, "start", "sweep.linear"), "start");
    const double stop = number(require(lin, "stop", "sweep.linear"), "stop");
    const double step = number(require(lin, "step", "sweep.linear"), "step");
    if (!(step > 0)) bad("'sweep.linear.step' must be positive");
    const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count < 1 || count > 1000000) bad("'sweep.linear' describes an empty or oversized grid");
    for (long i = 0; i < count; ++i) grid.push_back(start + double(i) * step);
  } else if (s.contains("log")) {
    const auto& lg = s["log"];
    const double start = number(require(lg, "start", "sweep.log"), "start");
    const double stop = number(require(lg, "stop", "sweep.log"), "stop");
    const double per = lg.contains("per_decade") ? number(lg["per_decade"], "per_decade") : 10.0;
    if (!(start > 0 && stop >= start && per > 0)) bad("'sweep.log' needs 0 < start <= stop and per_decade > 0");
    const double span = std::log10(stop / start);
    const long count = std::lround(std::floor(span * per + 1e-9)) + 1;
    for (long i = 0; i < count; ++i) grid.push_back(start * std::pow(10.0, double(i) / per));
  } else {
    bad("'sweep' needs one of grid, linear or log");
  }
  if (grid.empty()) bad("empty sweep grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) bad("sweep grid must be strictly increasing");
  return grid;
}

}  // namespace

std::string_view to_string(scenario s) {
  for (auto [k, name] : scenario_names)
    if (k == s) return name;
  return "unknown";
}

scenario parse_scenario(std::string_view name) {
  for (auto [k, n] : scenario_names)
    if (n == name) return k;
  bad("unknown scenario '" + std::string(name) + "'");
}

experiment_config parse_config(const json& j) {
  if (!j.is_object()) bad("config must be a JSON object");
  experiment_config c;
  const auto& sc = require(j, "scenario", "config");
  if (!sc.is_string()) bad("'scenario' must be a string");
  c.kind = parse_scenario(sc.get<std::string>());

  if (j.contains("sector")) {
    const auto& s = j["sector"];
    if (!s.is_object()) bad("'sector' must be an object");
    const auto& kind = require(s, "kind", "sector");
    if (!kind.is_string()) bad("'sector.kind' must be a string");
    try {
      c.background.kind = parse_sector(kind.get<std::string>());
    } catch (const error& e) {
      bad(e.what());
    }
    if (s.contains("X") && !s["X"].is_null()) c.background.X = number(s["X"], "sector.X");
    if (s.contains("L")) c.background.L = number(s["L"], "sector.L");
    if (s.contains("m") && !s["m"].is_null()) c.background.m = number(s["m"], "sector.m");
    if (s.contains("H") && !s["H"].is_null()) c.background.H = number(s["H"], "sector.H");
    if (s.contains("relax")) {
      if (!s["relax"].is_boolean()) bad("'sector.relax' must be a boolean");
      c.background.relax = s["relax"].get<bool>();
    }
    if (c.background.m && c.background.H) bad("give either sector.m or sector.H, not both");
  }

  const auto& ch = require(j, "chain", "config");
  const auto& N = require(ch, "N", "chain");
  if (!N.is_number_integer()) bad("'chain.N' must be an integer");
  c.chain.N = N.get<int>();
  c.chain.g = number(require(ch, "g", "chain"), "chain.g");
  c.chain.bc = c.background.kind == sector::vacuum ? boundary::periodic : boundary::fixed;
  if (ch.contains("boundary")) {
    if (!ch["boundary"].is_string()) bad("'chain.boundary' must be a string");
    try {
      c.chain.bc = parse_boundary(ch["boundary"].get<std::string>());
    } catch (const error& e) {
      bad(e.what());
    }
  }
  if (ch.contains("left_anchor")) c.chain.left_anchor = number(ch["left_anchor"], "chain.left_anchor");
  if (ch.contains("right_anchor")) c.chain.right_anchor = number(ch["right_anchor"], "chain.right_anchor");
  try {
    c.chain.validate();
  } catch (const error& e) {
    bad(e.what());
  }

  const auto& sw = require(j, "sweep", "config");
  if (!sw.is_object()) bad("'sweep' must be an object");
  const auto& name = require(sw, "name", "sweep");
  if (!name.is_string()) bad("'sweep.name' must be a string");
  c.sweep.name = name.get<std::string>();
  c.sweep.grid = expand_grid(sw);

  if (j.contains("options")) {
    if (!j["options"].is_object()) bad("'options' must be an object");
    c.options = j["options"];
  }
  if (j.contains("seed_solution_path") && !j["seed_solution_path"].is_null()) {
    if (!j["seed_solution_path"].is_string()) bad("'seed_solution_path' must be a string");
    c.seed_solution_path = j["seed_solution_path"].get<std::string>();
  }
  return c;
}

experiment_config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open config '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    bad("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  auto c = parse_config(j);
  if (c.seed_solution_path && c.seed_solution_path->is_relative())
    c.seed_solution_path = path.parent_path() / *c.seed_solution_path;
  return c;
}

json to_json(const experiment_config& c) {
  json sector = {{"kind", std::string(to_string(c.background.kind))},
                 {"L", c.background.L},
                 {"relax", c.background.relax},
                 {"X", c.background.X ? json(*c.background.X) : json()},
                 {"m", c.background.m ? json(*c.background.m) : json()},
                 {"H", c.background.H ? json(*c.background.H) : json()}};
  return {{"scenario", std::string(to_string(c.kind))},
          {"chain",
           {{"N", c.chain.N},
            {"g", c.chain.g},
            {"boundary", std::string(to_string(c.chain.bc))},
            {"left_anchor", c.chain.left_anchor},
            {"right_anchor", c.chain.right_anchor}}},
          {"sector", sector},
          {"sweep", {{"name", c.sweep.name}, {"grid", c.sweep.grid}}},
          {"options", c.options},
          {"seed_solution_path", c.seed_solution_path ? json(c.seed_solution_path->string()) : json()}};
}

std::string config_hash(const experiment_config& c) {
  const std::string text = to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace fkent
