#include <algorithm>
#include <cmath>
#include <limits>

#include "scenario_util.hpp"

namespace fkent {

using detail::entropy_of;

namespace {

double centre_of(const classical_solution& s) { return block_centers(s).at(0); }

std::pair<int, double> argmax(const std::vector<double>& v) {
  const auto it = std::max_element(v.begin(), v.end());
  return {int(it - v.begin()), *it};
}

}  // namespace

entanglement_report run_entropy_profile(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "l");
  auto r = detail::start_report(c, o);
  const auto bg = build_background(c);
  const auto basis = diagonalize(stability_matrix(bg));
  const double centre = centre_of(bg);
  const int n = int(c.sweep.grid.size());
  std::vector<double> es(n);
  parallel_for(n, o.threads, [&](int i) {
    const int l = detail::as_int(c.sweep.grid[i], "block size l");
    es[i] = entropy_of(basis, centered_block(centre, l, c.chain.N));
  });
  for (int i = 0; i < n; ++i) r.rows.push_back({c.sweep.grid[i], {{"E_S", es[i]}}});
  const auto [at, top] = argmax(es);
  r.fits["argmax_l"] = c.sweep.grid[at];
  r.fits["max_E_S"] = top;
  r.fits["center"] = centre;
  if (has_interior_maximum(es)) r.flags.push_back("interior_maximum");
  return r;
}

entanglement_report run_alpha_fit(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "g");
  auto r = detail::start_report(c, o);
  const int n = int(c.sweep.grid.size());
  std::vector<std::vector<std::pair<std::string, double>>> q(n);
  parallel_for(n, o.threads, [&](int i) {
    const double g = c.sweep.grid[i];
    const auto bg = build_background(c, g);
    const auto basis = diagonalize(stability_matrix(bg));
    const double centre = centre_of(bg);
    const double e2 = entropy_of(basis, centered_block(centre, 2, c.chain.N));
    const double e4 = entropy_of(basis, centered_block(centre, 4, c.chain.N));
    q[i] = {{"alpha", (e4 - e2) / std::log(2.0)}, {"E_S_2", e2}, {"E_S_4", e4}};
  });
  for (int i = 0; i < n; ++i) r.rows.push_back({c.sweep.grid[i], q[i]});
  return r;
}

entanglement_report run_max_entropy_sweep(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "g");
  auto r = detail::start_report(c, o);
  const int n = int(c.sweep.grid.size());
  const double reach = detail::option(c, "l_max_factor", 3.0);
  std::vector<std::vector<std::pair<std::string, double>>> q(n);
  parallel_for(n, o.threads, [&](int i) {
    const double g = c.sweep.grid[i];
    const auto bg = build_background(c, g);
    const auto basis = diagonalize(stability_matrix(bg));
    const double centre = centre_of(bg);
    const int step = std::max(1, int(std::sqrt(g) / 25));
    const int l_max = std::min(c.chain.N / 2, std::max(4, int(reach * std::sqrt(g))));
    double best = -1;
    int best_l = 0;
    for (int l = 2; l <= l_max; l += step) {
      const double e = entropy_of(basis, centered_block(centre, l, c.chain.N));
      if (e > best) {
        best = e;
        best_l = l;
      }
    }
    q[i] = {{"max_E_S", best}, {"argmax_l", double(best_l)}, {"omega_1", basis.omega[0]}};
  });
  for (int i = 0; i < n; ++i) r.rows.push_back({c.sweep.grid[i], q[i]});

  const auto es = r.column("max_E_S");
  const auto w1 = r.column("omega_1");
  const int i_es = argmax(es).first;
  const int i_w = int(std::min_element(w1.begin(), w1.end()) - w1.begin());
  r.fits["g_at_max_entropy"] = c.sweep.grid[i_es];
  r.fits["g_at_min_omega_1"] = c.sweep.grid[i_w];
  r.fits["grid_offset"] = double(std::abs(i_es - i_w));
  std::vector<double> tail(w1.begin() + i_w, w1.end());
  r.fits["omega_1_sign_changes_after_min"] = derivative_sign_changes(tail);
  if (std::abs(i_es - i_w) <= 1) r.flags.push_back("colocated");
  return r;
}

entanglement_report run_correlation_compare(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "g");
  auto r = detail::start_report(c, o);
  const int n = int(c.sweep.grid.size());
  std::vector<std::vector<std::pair<std::string, double>>> q(n);
  std::vector<json> profiles(n);
  parallel_for(n, o.threads, [&](int i) {
    const double g = c.sweep.grid[i];
    experiment_config sc = c;
    if (sc.background.kind == sector::vacuum) sc.background.kind = sector::single_soliton;
    const auto sol = build_background(sc, g);
    auto vac = vacuum_solution(sol.spec);
    vac.spec.left_anchor = vac.spec.right_anchor = 0;
    const auto bs = diagonalize(stability_matrix(sol));
    const auto bv = diagonalize(stability_matrix(vac));
    const int ref = int(std::lround(sol.centers.at(0))) - 1;
    const int count = c.chain.N - ref;
    auto row_of = [&](const mode_basis& b) {
      // G(ref, ref + n) = sum_l eta(ref, l) eta(ref + n, l) / (2 omega_l)
      const Eigen::VectorXd w = (0.5 * b.omega.cwiseInverse()).cwiseProduct(b.eta.row(ref).transpose());
      return Eigen::VectorXd(b.eta.middleRows(ref, count) * w);
    };
    const Eigen::VectorXd xs = row_of(bs);
    const Eigen::VectorXd xv = row_of(bv);
    const double core = std::sqrt(g);
    const int near = std::min(count - 1, std::max(1, int(0.5 * count)));
    double worst = 0;
    for (int k = 0; k <= near; ++k) worst = std::max(worst, std::abs(xs[k] - xv[k]) / std::abs(xv[k]));
    int inside = 0, above = 0;
    for (int k = 1; k < std::min<double>(core, count); ++k, ++inside)
      if (std::abs(xs[k]) > std::abs(xv[k])) ++above;
    q[i] = {{"max_rel_diff", worst}, {"core_excess_fraction", inside ? double(above) / inside : 0.0}};
    const int lo = int(2 * core), hi = std::min(int(4 * core), int(0.8 * count));
    if (hi - lo >= 4) {
      std::vector<double> x, ys, yv;
      for (int k = lo; k <= hi; ++k) {
        x.push_back(k);
        ys.push_back(std::log(std::abs(xs[k])));
        yv.push_back(std::log(std::abs(xv[k])));
      }
      const double s_sol = fit_line(x, ys).slope;
      const double s_vac = fit_line(x, yv).slope;
      q[i].push_back({"far_slope_sol", s_sol});
      q[i].push_back({"far_slope_vac", s_vac});
      q[i].push_back({"far_slope_rel_diff", std::abs(s_sol - s_vac) / std::abs(s_vac)});
    }
    std::vector<double> vs(xs.data(), xs.data() + count), vv(xv.data(), xv.data() + count);
    profiles[i] = {{"g", g}, {"reference_site", ref + 1}, {"xi_sol", vs}, {"xi_vac", vv}};
  });
  for (int i = 0; i < n; ++i) r.rows.push_back({c.sweep.grid[i], q[i]});
  r.extra["profiles"] = profiles;
  return r;
}

entanglement_report run_weak_coupling_profile(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "l");
  if (c.chain.g > continuum_coupling_threshold)
    throw error(errc::config_error, "weak_coupling_profile needs g <= " + std::to_string(continuum_coupling_threshold));
  experiment_config kc = c;
  if (kc.background.kind == sector::vacuum) kc.background.kind = sector::kink;
  auto r = run_entropy_profile(kc, o);
  r.config = c;
  const auto bg = build_background(kc);
  r.fits["internal_modes"] = double(classify_modes(diagonalize(stability_matrix(bg))).internal.size());

  for (double g : detail::option_list(c, "mode_count_g", {})) {
    const auto k = sample_and_relax(continuum_soliton({c.chain.N, g, boundary::fixed}));
    r.fits["internal_modes_at_g_" + std::to_string(g).substr(0, 6)] =
        double(classify_modes(diagonalize(stability_matrix(k))).internal.size());
  }

  // Two kinks at a third and two thirds of the chain.
  const int N = c.chain.N;
  chain_spec spec{N, c.chain.g, boundary::fixed};
  const auto k1 = continuum_soliton(spec, (N + 1) / 3.0);
  const auto k2 = continuum_soliton(spec, 2.0 * (N + 1) / 3.0);
  spec.left_anchor = k1.spec.left_anchor + k2.spec.left_anchor;
  spec.right_anchor = k1.spec.right_anchor + k2.spec.right_anchor;
  classical_solution pair = k1;
  pair.spec = spec;
  pair.phi = k1.phi + k2.phi;
  pair.kind = sector::double_soliton;
  pair = sample_and_relax(pair);
  const auto basis = diagonalize(stability_matrix(pair));
  const int l = detail::as_int(detail::option(c, "pair_block", 5), "pair_block");
  const auto [A, B] = detail::block_pair(pair.centers.at(0), pair.centers.at(1), l, N);
  r.fits["kink_pair_log_negativity"] = detail::log_negativity_of(basis, A, B);
  r.fits["kink_pair_distance"] = pair.centers.at(1) - pair.centers.at(0);
  return r;
}

}  // namespace fkent
