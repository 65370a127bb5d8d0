#include <cmath>
#include <map>
#include <mutex>

#include "fkent/elliptic.hpp"
#include "fkent/experiments.hpp"
#include "fkent/solution_io.hpp"

namespace fkent {

namespace {

classical_solution junction(const chain_spec& chain, const sector_config& s, int sigma) {
  const double m = s.m ? *s.m : k_from_H(s.L, sigma, *s.H);
  return sample_finite_sg(chain, make_finite_sg_params(s.L, sigma, m));
}

}  // namespace

classical_solution build_background(const experiment_config& c, double g) {
  if (c.seed_solution_path) {
    auto seed = load_solution(*c.seed_solution_path);
    if (seed.spec.N != c.chain.N || seed.spec.g != g)
      throw error(errc::config_error, "seed solution does not match chain N and g");
    return seed;
  }
  chain_spec chain = c.chain;
  chain.g = g;
  const auto& s = c.background;
  classical_solution initial;
  switch (s.kind) {
    case sector::vacuum:
      initial = vacuum_solution(chain);
      break;
    case sector::single_soliton:
    case sector::kink:
      initial = (s.m || s.H) ? junction(chain, s, 1) : continuum_soliton(chain, s.X);
      break;
    case sector::double_soliton:
      if (!s.m && !s.H) throw error(errc::config_error, "double_soliton sector needs m or H");
      initial = junction(chain, s, 2);
      break;
  }
  return s.relax ? sample_and_relax(initial) : initial;
}

classical_solution build_background(const experiment_config& c) { return build_background(c, c.chain.g); }

std::vector<double> block_centers(const classical_solution& s) {
  if (s.kind == sector::vacuum) return {0.5 * (s.spec.N + 1)};
  return s.centers;
}

double sampled_core_distance(int N, double L, double m) {
  const auto mod = elliptic::modulus<double>::from_parameter(m);
  return mod.k() * elliptic::complete_K(mod) * (N - 1) / L;
}

classical_solution double_soliton_at_distance(const chain_spec& chain, double L, double distance) {
  const auto [lo, hi] = stability_interval(L, 2);
  const double d_lo = sampled_core_distance(chain.N, L, lo);
  const double d_hi = sampled_core_distance(chain.N, L, hi);
  auto out_of_range = [&](double d) {
    return error(errc::no_stable_configuration, "core distance " + std::to_string(d) +
                                                    " outside the double-junction range (" + std::to_string(d_lo) +
                                                    ", " + std::to_string(d_hi) + "]");
  };
  auto relaxed_at = [&](double sampled) {
    if (!(sampled > d_lo && sampled <= d_hi)) throw out_of_range(distance);
    double a = lo, b = hi;
    for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
      const double mid = 0.5 * (a + b);
      (sampled_core_distance(chain.N, L, mid) < sampled ? a : b) = mid;
    }
    return sample_and_relax(sample_finite_sg(chain, make_finite_sg_params(L, 2, b)));
  };
  try {
    // Relaxation shifts the cores; re-aim the sampled distance at the relaxed one.
    double target = distance;
    auto s = relaxed_at(target);
    for (int i = 0; i < 6; ++i) {
      const double miss = distance - (s.centers.at(1) - s.centers.at(0));
      if (std::abs(miss) < 0.5) break;
      target += miss;
      s = relaxed_at(target);
    }
    diagonalize(stability_matrix(s));
    return s;
  } catch (const error& e) {
    if (e.code() == errc::unstable || e.code() == errc::not_converged || e.code() == errc::no_centers)
      throw error(errc::no_stable_configuration, e.what());
    throw;
  }
}

int entropy_optimal_block(int N, double g) {
  static std::mutex guard;
  static std::map<std::pair<int, double>, int> cache;
  {
    std::lock_guard lock(guard);
    if (auto it = cache.find({N, g}); it != cache.end()) return it->second;
  }
  const auto s = sample_and_relax(continuum_soliton({N, g, boundary::fixed}));
  const auto basis = diagonalize(stability_matrix(s));
  const double c = s.centers.at(0);
  const int l_max = std::min(N - 2, int(4 * std::sqrt(g)) + 2);
  const int step = std::max(1, int(std::sqrt(g) / 25));
  auto entropy = [&](int l) { return ground_state_entropy(basis, centered_block(c, l, N)); };
  int best = 2;
  double best_value = entropy(2);
  for (int l = 2 + step; l <= l_max; l += step) {
    const double v = entropy(l);
    if (v > best_value) {
      best_value = v;
      best = l;
    }
  }
  for (int l = std::max(2, best - step + 1); l <= std::min(l_max, best + step - 1); ++l) {
    const double v = entropy(l);
    if (v > best_value) {
      best_value = v;
      best = l;
    }
  }
  std::lock_guard lock(guard);
  cache[{N, g}] = best;
  return best;
}

}  // namespace fkent
