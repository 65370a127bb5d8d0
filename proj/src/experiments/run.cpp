#include <chrono>

#include "fkent/experiments.hpp"

namespace fkent {

namespace {

entanglement_report dispatch(const experiment_config& c, const run_options& o) {
  switch (c.kind) {
    case scenario::entropy_profile: return run_entropy_profile(c, o);
    case scenario::sliding_blocks: return run_sliding_blocks(c, o);
    case scenario::ln_vs_separation: return run_ln_vs_separation(c, o);
    case scenario::alpha_fit: return run_alpha_fit(c, o);
    case scenario::beta_fit: return run_beta_fit(c, o);
    case scenario::max_entropy_sweep: return run_max_entropy_sweep(c, o);
    case scenario::correlation_compare: return run_correlation_compare(c, o);
    case scenario::weak_coupling_profile: return run_weak_coupling_profile(c, o);
    case scenario::noncritical_oscillation: return run_noncritical_oscillation(c, o);
    case scenario::squeeze_single: return run_squeeze_single(c, o);
    case scenario::squeeze_double: return run_squeeze_double(c, o);
    case scenario::wkb_check: return run_wkb_check(c, o);
  }
  throw error(errc::config_error, "unhandled scenario");
}

}  // namespace

entanglement_report run(const experiment_config& c, const run_options& o) {
  if (o.threads < 1) throw error(errc::config_error, "thread count must be positive");
  const auto start = std::chrono::steady_clock::now();
  auto r = dispatch(c, o);
  r.config = c;
  r.threads = o.threads;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace fkent
