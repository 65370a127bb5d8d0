#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "scenario_util.hpp"

namespace fkent {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr double mirror_tie_tolerance = 1e-6;

struct separation_point {
  bool stable = false;
  double d = nan;  ///< measured gap between the core-centred blocks
  double log_negativity = nan;
  double omega_1 = nan;
  double omega_2 = nan;
};

// Double junction whose blocks of size l, centred on the cores, are d_target apart.
separation_point measure_separation(const experiment_config& c, double g, int l, double d_target, bool skip_unstable) {
  chain_spec chain = c.chain;
  chain.g = g;
  chain.bc = boundary::fixed;
  separation_point p;
  classical_solution bg;
  try {
    bg = double_soliton_at_distance(chain, c.background.L, d_target + l);
  } catch (const error& e) {
    if (skip_unstable && e.code() == errc::no_stable_configuration) return p;
    throw;
  }
  const auto basis = diagonalize(stability_matrix(bg));
  const double c1 = bg.centers.at(0), c2 = bg.centers.at(1);
  const auto [A, B] = detail::block_pair(c1, c2, l, chain.N);
  p.stable = true;
  p.d = c2 - c1 - l;
  p.log_negativity = detail::log_negativity_of(basis, A, B);
  p.omega_1 = basis.omega[0];
  p.omega_2 = basis.omega[1];
  return p;
}

std::vector<separation_point> separation_sweep(const experiment_config& c, double g, int l,
                                               const std::vector<double>& gaps, const run_options& o) {
  const bool skip = c.options.value("skip_unstable", false);
  std::vector<separation_point> out(gaps.size());
  parallel_for(int(gaps.size()), o.threads, [&](int i) { out[i] = measure_separation(c, g, l, gaps[i], skip); });
  return out;
}

// Pairs of blocks of size l with gap d, placed symmetrically about the middle of a ring.
double vacuum_log_negativity(const mode_basis& ring, int N, int l, double d) {
  const double mid = 0.5 * (N + 1);
  const auto [A, B] = detail::block_pair(mid - 0.5 * (d + l), mid + 0.5 * (d + l), l, N);
  return detail::log_negativity_of(ring, A, B);
}

struct decay_fit {
  double beta;
  double r_squared;
  int points;
};

// beta = -slope of ln E_LN against d/l over the points inside [lo, hi]; E_LN = 0 is dropped.
decay_fit fit_decay(const std::vector<double>& d_over_l, const std::vector<double>& ln, double lo, double hi) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < ln.size(); ++i)
    if (d_over_l[i] >= lo && d_over_l[i] <= hi && ln[i] > 0 && std::isfinite(ln[i])) {
      x.push_back(d_over_l[i]);
      y.push_back(std::log(ln[i]));
    }
  if (x.size() < 4)
    throw error(errc::fit_window_too_small, "decay fit window holds " + std::to_string(x.size()) + " points");
  const auto f = fit_line(x, y);
  return {-f.slope, f.r_squared, f.points};
}

bool strictly_increases_somewhere(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (std::isfinite(v[i]) && std::isfinite(v[j]) && v[j] > v[i]) return true;
  return false;
}

int block_size(const experiment_config& c, double g) {
  if (detail::has_option(c, "l")) return detail::as_int(detail::option(c, "l", 0), "option l");
  return entropy_optimal_block(c.chain.N, g);
}

mode_basis ring_basis(int N, double g) {
  return diagonalize(stability_matrix(vacuum_solution({N, g, boundary::periodic})));
}

}  // namespace

entanglement_report run_sliding_blocks(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "n");
  if (!detail::has_option(c, "l") || !detail::has_option(c, "d"))
    throw error(errc::config_error, "sliding_blocks needs options l and d");
  auto r = detail::start_report(c, o);
  const int l = detail::as_int(detail::option(c, "l", 0), "option l");
  const double d = detail::option(c, "d", 0);
  const int N = c.chain.N;

  classical_solution bg;
  if (c.background.kind == sector::double_soliton && !c.background.m && !c.background.H) {
    chain_spec chain = c.chain;
    chain.bc = boundary::fixed;
    bg = double_soliton_at_distance(chain, c.background.L, d + l);
  } else {
    bg = build_background(c);
  }
  const auto basis = diagonalize(stability_matrix(bg));
  const double mid = 0.5 * (N + 1);
  const int n = int(c.sweep.grid.size());
  std::vector<double> ln(n);
  parallel_for(n, o.threads, [&](int i) {
    const double shift = detail::as_int(c.sweep.grid[i], "offset n");
    const auto [A, B] = detail::block_pair(mid + shift - 0.5 * (d + l), mid + shift + 0.5 * (d + l), l, N);
    ln[i] = detail::log_negativity_of(basis, A, B);
  });
  for (int i = 0; i < n; ++i) r.rows.push_back({c.sweep.grid[i], {{"E_LN", ln[i]}}});

  // When l + d and N have opposite parity, offsets n and 1 - n are mirror images and
  // tie up to rounding; among near-ties the smallest |n| is reported.
  const double hi = *std::max_element(ln.begin(), ln.end());
  int top = -1;
  for (int i = 0; i < n; ++i)
    if (ln[i] >= hi * (1 - mirror_tie_tolerance) &&
        (top < 0 || std::abs(c.sweep.grid[i]) < std::abs(c.sweep.grid[top])))
      top = i;
  r.fits["argmax_n"] = c.sweep.grid[top];
  const double lo = *std::min_element(ln.begin(), ln.end());
  r.fits["relative_variation"] = hi > 0 ? (hi - lo) / hi : 0.0;
  // Largest strict local maximum on each side with |n| >= l.
  std::optional<int> left, right;
  for (int i = 1; i + 1 < n; ++i) {
    if (!(ln[i] > ln[i - 1] && ln[i] >= ln[i + 1])) continue;
    const double at = c.sweep.grid[i];
    if (at <= -l && (!left || ln[i] > ln[*left])) left = i;
    if (at >= l && (!right || ln[i] > ln[*right])) right = i;
  }
  if (left) r.fits["secondary_max_left_n"] = c.sweep.grid[*left];
  if (right) r.fits["secondary_max_right_n"] = c.sweep.grid[*right];
  r.fits["centre_distance"] = bg.kind == sector::vacuum ? nan : bg.centers.at(1) - bg.centers.at(0);
  return r;
}

entanglement_report run_ln_vs_separation(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "d_sol");
  auto r = detail::start_report(c, o);
  const double g = c.chain.g;
  const int l = block_size(c, g);
  const auto points = separation_sweep(c, g, l, c.sweep.grid, o);
  const bool with_vacuum = c.options.value("compare_vacuum", true);
  const auto ring = with_vacuum ? ring_basis(c.chain.N, g) : mode_basis{};

  std::vector<double> x, ln;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.stable) {
      r.rows.push_back({c.sweep.grid[i], {{"stable", 0.0}}});
      continue;
    }
    report_row row{c.sweep.grid[i],
                   {{"stable", 1.0},
                    {"d_over_l", p.d / l},
                    {"E_LN", p.log_negativity},
                    {"omega_1", p.omega_1},
                    {"omega_2", p.omega_2}}};
    if (with_vacuum) row.quantities.push_back({"E_LN_vacuum", vacuum_log_negativity(ring, c.chain.N, l, p.d)});
    r.rows.push_back(std::move(row));
    x.push_back(p.d / l);
    ln.push_back(p.log_negativity);
  }
  r.fits["l"] = l;
  if (strictly_increases_somewhere(ln)) r.flags.push_back("non_monotone");
  if (detail::has_option(c, "fit_window")) {
    const auto w = detail::option_list(c, "fit_window", {});
    if (w.size() != 2) throw error(errc::config_error, "fit_window needs [lo, hi]");
    const auto f = fit_decay(x, ln, w[0], w[1]);
    r.fits["beta"] = f.beta;
    r.fits["beta_r_squared"] = f.r_squared;
    r.fits["beta_points"] = f.points;
  }
  if (with_vacuum) {
    bool above = true;
    for (const auto& row : r.rows)
      if (row.quantities.size() > 1 && !(row.at("E_LN") > row.at("E_LN_vacuum"))) above = false;
    if (above) r.flags.push_back("soliton_exceeds_vacuum");
  }
  return r;
}

entanglement_report run_beta_fit(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "g");
  auto r = detail::start_report(c, o);
  const double r2_floor = detail::option(c, "r_squared_floor", 0.95);
  const int N = c.chain.N;
  for (double g : c.sweep.grid) {
    std::vector<double> x, ln;
    int l = 0;
    if (c.background.kind == sector::vacuum) {
      l = detail::has_option(c, "l") ? detail::as_int(detail::option(c, "l", 0), "option l")
                                     : std::max(2, int(std::lround(std::sqrt(g))));
      const auto ring = ring_basis(N, g);
      const auto ratios = detail::option_list(c, "d_over_l", {1, 1.5, 2, 2.5, 3, 3.5, 4});
      std::vector<double> values(ratios.size());
      parallel_for(int(ratios.size()), o.threads, [&](int i) {
        values[i] = vacuum_log_negativity(ring, N, l, std::round(ratios[i] * l));
      });
      for (std::size_t i = 0; i < ratios.size(); ++i) {
        x.push_back(std::round(ratios[i] * l) / l);
        ln.push_back(values[i]);
      }
    } else {
      l = block_size(c, g);
      const auto [m_lo, m_hi] = stability_interval(c.background.L, 2);
      const double d_lo = sampled_core_distance(N, c.background.L, m_lo);
      const double d_hi = sampled_core_distance(N, c.background.L, m_hi);
      const int count = detail::as_int(detail::option(c, "points", 12), "option points");
      std::vector<double> gaps;
      for (int i = 0; i < count; ++i) gaps.push_back(d_lo + (d_hi - d_lo) * (i + 1.0) / count - l);
      experiment_config sc = c;
      sc.options["skip_unstable"] = true;
      for (const auto& p : separation_sweep(sc, g, l, gaps, o)) {
        if (!p.stable) continue;
        x.push_back(p.d / l);
        ln.push_back(p.log_negativity);
      }
    }
    // Asymptotic window: the half of the sweep with the largest d/l.
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    std::vector<std::pair<std::string, double>> q{{"l", double(l)}};
    try {
      const auto f = fit_decay(x, ln, lo, std::numeric_limits<double>::infinity());
      q.push_back({"beta", f.beta});
      q.push_back({"r_squared", f.r_squared});
      q.push_back({"points", double(f.points)});
      if (f.r_squared < r2_floor) r.flags.push_back("exponential_breakdown_at_g_" + std::to_string(g));
    } catch (const error& e) {
      if (e.code() != errc::fit_window_too_small) throw;
      q.push_back({"points", 0.0});
      r.flags.push_back("fit_window_too_small_at_g_" + std::to_string(g));
    }
    r.rows.push_back({g, q});
  }
  return r;
}

entanglement_report run_wkb_check(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "d_sol");
  auto r = detail::start_report(c, o);
  const double g = c.chain.g;
  const int l = block_size(c, g);
  const auto points = separation_sweep(c, g, l, c.sweep.grid, o);
  std::vector<double> x, y;
  bool toy_above = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.stable) {
      r.rows.push_back({c.sweep.grid[i], {{"stable", 0.0}}});
      continue;
    }
    const double ratio = (p.omega_2 - p.omega_1) / p.omega_1;
    const double toy = toy_two_oscillator(p.omega_1, p.omega_2).log_negativity;
    if (!(toy > p.log_negativity)) toy_above = false;
    r.rows.push_back({c.sweep.grid[i],
                      {{"stable", 1.0},
                       {"d", p.d},
                       {"gap_ratio", ratio},
                       {"predicted", std::exp(-p.d / std::sqrt(g))},
                       {"E_LN", p.log_negativity},
                       {"toy_E_LN", toy}}});
    if (ratio > 0) {
      x.push_back(p.d / std::sqrt(g));
      y.push_back(std::log(ratio));
    }
  }
  if (x.size() >= 2) {
    const auto f = fit_line(x, y);
    r.fits["slope"] = f.slope;
    r.fits["r_squared"] = f.r_squared;
  }
  r.fits["l"] = l;
  if (toy_above) r.flags.push_back("toy_overestimates");
  return r;
}

entanglement_report run_noncritical_oscillation(const experiment_config& c, const run_options& o) {
  detail::require_sweep(c, "d_sol");
  auto r = detail::start_report(c, o);
  const double g = c.chain.g;
  const int l = block_size(c, g);
  const auto points = separation_sweep(c, g, l, c.sweep.grid, o);
  std::vector<double> ln, w1, ratio;
  std::vector<int> index;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!p.stable) {
      r.rows.push_back({c.sweep.grid[i], {{"stable", 0.0}}});
      continue;
    }
    r.rows.push_back({c.sweep.grid[i],
                      {{"stable", 1.0},
                       {"d_over_l", p.d / l},
                       {"E_LN", p.log_negativity},
                       {"omega_1", p.omega_1},
                       {"omega_2", p.omega_2}}});
    ln.push_back(p.log_negativity);
    w1.push_back(p.omega_1);
    ratio.push_back(p.omega_2 / p.omega_1);
    index.push_back(int(i));
  }
  r.fits["l"] = l;
  if (strictly_increases_somewhere(ln)) r.flags.push_back("non_monotone");
  if (!ln.empty()) {
    const int a = int(std::max_element(ln.begin(), ln.end()) - ln.begin());
    const int b = int(std::min_element(w1.begin(), w1.end()) - w1.begin());
    r.fits["d_sol_at_max_E_LN"] = c.sweep.grid[index[a]];
    r.fits["d_sol_at_min_omega_1"] = c.sweep.grid[index[b]];
    if (std::abs(a - b) <= 1) r.flags.push_back("colocated");
  }
  if (ln.size() >= 3) r.fits["rank_correlation_ratio_vs_E_LN"] = rank_correlation(ratio, ln);
  return r;
}

}  // namespace fkent
