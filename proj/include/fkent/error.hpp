#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fkent {

enum class errc {
  domain_error,
  divergent_integral,
  no_root,
  not_converged,
  unstable,
  no_centers,
  zero_mode,
  not_positive_definite,
  overlapping_blocks,
  invalid_partition,
  too_few_internal_modes,
  not_ground_form,
  fit_window_too_small,
  no_stable_configuration,
  config_error,
};

constexpr std::string_view to_string(errc c) noexcept {
  switch (c) {
    case errc::domain_error: return "DomainError";
    case errc::divergent_integral: return "DivergentIntegral";
    case errc::no_root: return "NoRoot";
    case errc::not_converged: return "NotConverged";
    case errc::unstable: return "Unstable";
    case errc::no_centers: return "NoCenters";
    case errc::zero_mode: return "ZeroMode";
    case errc::not_positive_definite: return "NotPositiveDefinite";
    case errc::overlapping_blocks: return "OverlappingBlocks";
    case errc::invalid_partition: return "InvalidPartition";
    case errc::too_few_internal_modes: return "TooFewInternalModes";
    case errc::not_ground_form: return "NotGroundForm";
    case errc::fit_window_too_small: return "FitWindowTooSmall";
    case errc::no_stable_configuration: return "NoStableConfiguration";
    case errc::config_error: return "ConfigError";
  }
  return "Unknown";
}

/// Input errors map to a configuration failure; everything else is numerical.
constexpr bool is_config_error(errc c) noexcept {
  return c == errc::config_error || c == errc::domain_error ||
         c == errc::overlapping_blocks || c == errc::invalid_partition;
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace fkent
