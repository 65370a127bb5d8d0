// fkent: solve, diagonalize and run entanglement experiments from a JSON config.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>

#include <CLI11.hpp>

#include "fkent/experiments.hpp"
#include "fkent/solution_io.hpp"

namespace fs = std::filesystem;
using namespace fkent;

namespace {

enum exit_code { ok = 0, config_failure = 2, numerical_failure = 3 };

struct cli_options {
  std::string config;
  std::string out = ".";
  std::string format = "json";
  int threads = 1;
};

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::config_error, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw error(errc::config_error, "'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

// solve and modes only need the chain and sector; fill in a placeholder experiment.
experiment_config background_config(const fs::path& path) {
  json j = read_json(path);
  if (!j.is_object()) throw error(errc::config_error, "config must be a JSON object");
  if (!j.contains("scenario")) j["scenario"] = "entropy_profile";
  if (!j.contains("sweep")) j["sweep"] = {{"name", "l"}, {"grid", {1}}};
  auto c = parse_config(j);
  if (c.seed_solution_path && c.seed_solution_path->is_relative())
    c.seed_solution_path = path.parent_path() / *c.seed_solution_path;
  return c;
}

std::ofstream open_output(const cli_options& o, const std::string& stem) {
  fs::create_directories(o.out);
  const auto path = fs::path(o.out) / (stem + "." + o.format);
  std::ofstream out(path);
  if (!out) throw error(errc::config_error, "cannot write '" + path.string() + "'");
  std::cout << path.string() << '\n';
  return out;
}

void emit(const cli_options& o, const entanglement_report& r) {
  auto out = open_output(o, std::string(to_string(r.config.kind)));
  if (o.format == "csv")
    write_csv(out, r);
  else
    out << to_json(r).dump(2) << '\n';
}

int cmd_solve(const cli_options& o) {
  const auto c = background_config(o.config);
  const auto s = build_background(c);
  fs::create_directories(o.out);
  save_solution(fs::path(o.out) / "solution.fks", s);
  auto out = open_output(o, "solution");
  if (o.format == "csv") {
    out << "n,phi\n";
    char buf[32];
    for (Eigen::Index n = 0; n < s.phi.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", s.phi[n]);
      out << n + 1 << ',' << buf << '\n';
    }
  } else {
    json j = {{"schema_version", report_schema_version},
              {"config_hash", config_hash(c)},
              {"sector", std::string(to_string(s.kind))},
              {"energy", s.energy},
              {"centers", s.centers},
              {"params", s.params},
              {"warnings", s.warnings},
              {"phi", std::vector<double>(s.phi.data(), s.phi.data() + s.phi.size())}};
    out << j.dump(2) << '\n';
  }
  return ok;
}

int cmd_modes(const cli_options& o) {
  const auto c = background_config(o.config);
  const auto basis = diagonalize(stability_matrix(build_background(c)));
  const auto classes = classify_modes(basis);
  auto out = open_output(o, "spectrum");
  if (o.format == "csv") {
    write_spectrum_csv(out, basis, classes);
  } else {
    json modes = json::array();
    std::set<int> internal(classes.internal.begin(), classes.internal.end());
    for (Eigen::Index i = 0; i < basis.size(); ++i)
      modes.push_back({{"index", i}, {"omega", basis.omega[i]}, {"internal", internal.count(int(i)) > 0}});
    out << json{{"schema_version", report_schema_version}, {"config_hash", config_hash(c)}, {"modes", modes}}.dump(2)
        << '\n';
  }
  return ok;
}

int cmd_experiment(const cli_options& o, const std::set<scenario>& allowed, const char* name) {
  const auto c = load_config(o.config);
  if (!allowed.empty() && !allowed.count(c.kind))
    throw error(errc::config_error,
                "scenario '" + std::string(to_string(c.kind)) + "' is not handled by '" + name + "'");
  emit(o, run(c, {o.threads}));
  return ok;
}

int cmd_report(const cli_options& o) {
  emit(o, report_from_json(read_json(o.config)));
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frenkel-Kontorova soliton entanglement toolkit"};
  app.require_subcommand(1);
  cli_options o;
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "JSON config (for report: a JSON report)")->required();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    return sub;
  };
  const auto* solve = add("solve", "relax the configured background and store it");
  const auto* modes = add("modes", "fluctuation spectrum of the background");
  const auto* entropy = add("entropy", "block-entropy experiments");
  const auto* negativity = add("negativity", "logarithmic-negativity experiments");
  const auto* squeeze = add("squeeze", "squeezing and hashing-bound experiments");
  const auto* sweep = add("sweep", "any experiment scenario");
  const auto* report = add("report", "validate a JSON report and re-emit it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_failure;
  }

  try {
    if (solve->parsed()) return cmd_solve(o);
    if (modes->parsed()) return cmd_modes(o);
    if (entropy->parsed())
      return cmd_experiment(o,
                            {scenario::entropy_profile, scenario::alpha_fit, scenario::max_entropy_sweep,
                             scenario::correlation_compare, scenario::weak_coupling_profile},
                            "entropy");
    if (negativity->parsed())
      return cmd_experiment(o,
                            {scenario::sliding_blocks, scenario::ln_vs_separation, scenario::beta_fit,
                             scenario::wkb_check, scenario::noncritical_oscillation},
                            "negativity");
    if (squeeze->parsed())
      return cmd_experiment(o, {scenario::squeeze_single, scenario::squeeze_double}, "squeeze");
    if (sweep->parsed()) return cmd_experiment(o, {}, "sweep");
    if (report->parsed()) return cmd_report(o);
  } catch (const error& e) {
    std::cerr << "fkent: " << e.what() << '\n';
    return is_config_error(e.code()) ? config_failure : numerical_failure;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "fkent: " << e.what() << '\n';
    return config_failure;
  }
  return config_failure;
}
