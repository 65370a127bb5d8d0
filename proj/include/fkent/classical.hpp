#pragma once

#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "fkent/error.hpp"

namespace fkent {

/// Substrate period and peak-to-trough amplitude in dimensionless units.
inline constexpr double substrate_period = 2 * std::numbers::pi;
inline constexpr double substrate_amplitude = 2.0;

/// Below this coupling the continuum soliton is a poor starting point.
inline constexpr double continuum_coupling_threshold = 16.0;

enum class boundary {
  periodic,
  free,
  fixed,  ///< ghost sites phi_0 and phi_{N+1} held at the anchor values
};

enum class sector { vacuum, single_soliton, double_soliton, kink };

std::string_view to_string(boundary b);
std::string_view to_string(sector s);
boundary parse_boundary(std::string_view name);
sector parse_sector(std::string_view name);

struct chain_spec {
  int N = 0;
  double g = 0;
  boundary bc = boundary::free;
  double left_anchor = 0;
  double right_anchor = 0;

  void validate() const;
};

struct classical_solution {
  chain_spec spec;
  Eigen::VectorXd phi;
  sector kind = sector::vacuum;
  double energy = 0;
  /// 1-based lattice positions of the cores, ascending.
  std::vector<double> centers;
  /// Sector parameters echoed into persisted records.
  std::map<std::string, double> params;
  std::vector<std::string> warnings;
};

double substrate_potential(double phi);

double total_energy(const chain_spec& spec, const Eigen::Ref<const Eigen::VectorXd>& phi);

Eigen::VectorXd energy_gradient(const chain_spec& spec, const Eigen::Ref<const Eigen::VectorXd>& phi);

classical_solution vacuum_solution(const chain_spec& spec);

/// 4 atan(exp(-sigma (n - X) / sqrt(g))) on n = 1..N. With fixed ends the
/// anchors are taken from the same profile at n = 0 and n = N + 1.
classical_solution continuum_soliton(const chain_spec& spec, std::optional<double> X = std::nullopt,
                                     int sigma = 1);

/// Odd multiples of pi crossed by phi, linearly interpolated between sites.
std::vector<double> soliton_centers(const classical_solution& solution);

/// The `count` crossings with the steepest slope, ascending in position.
std::vector<double> core_centers(const classical_solution& solution, int count);

struct relax_options {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  bool record_energy = false;
};

struct relax_report {
  int iterations = 0;
  double residual = 0;
  double tolerance = 0;
  std::vector<double> energy_trace;
};

/// Effective stationarity threshold: the requested tolerance, raised to the
/// rounding floor of the coupling term.
double relax_tolerance(const chain_spec& spec, const Eigen::Ref<const Eigen::VectorXd>& phi,
                       double requested);

/// Damped Newton descent on the total energy. Every accepted step lowers or
/// keeps the energy. Throws NotConverged or Unstable.
classical_solution sample_and_relax(const chain_spec& spec, const Eigen::VectorXd& initial,
                                    const relax_options& options = {}, relax_report* report = nullptr);

/// Relaxes a sampled solution in place of its own spec, keeping its sector tag and parameters.
classical_solution sample_and_relax(const classical_solution& initial, const relax_options& options = {},
                                    relax_report* report = nullptr);

// ---------------------------------------------------------------------------
// Finite sine-Gordon junction of half-length L with boundary slope 2H.
//
// The elliptic parameter m (= k^2 in the modulus convention) labels the
// solution family. The topological index sigma counts the cores.

struct finite_sg_params {
  double L = 8;
  int sigma = 1;
  double m = 0.5;
  double H = 0;
  double x0 = 0;
};

/// Parameters m_sigma with sigma K(m_sigma) = L, sigma = 1..sigma_max; strictly decreasing.
std::vector<double> bifurcation_points(double L, int sigma_max);

/// The parameter interval (m_{sigma+1}, m_sigma] carrying sigma cores.
std::pair<double, double> stability_interval(double L, int sigma);

struct field_window {
  double lower;
  double upper;
};

/// Field window [H_lo, H_hi) of index sigma, H_sigma from (sigma+1) K(m = 1/H_sigma) = H_sigma L.
field_window stability_window_H(double L, int sigma);

/// Boundary field H = phi'(L) / 2 of the profile with parameter m.
double boundary_field(double L, int sigma, double m);

/// Inverse of boundary_field on the stability interval of sigma. Returns m.
double k_from_H(double L, int sigma, double H);

finite_sg_params make_finite_sg_params(double L, int sigma, double m, double x0 = 0);

class finite_sg_profile {
 public:
  explicit finite_sg_profile(const finite_sg_params& params);

  /// Throws DomainError outside [-L, L].
  double operator()(double x) const;
  double slope(double x) const;
  /// Same closed form, no range check; used for ghost anchors just outside the junction.
  double extended(double x) const;
  double extended_slope(double x) const;

  const finite_sg_params& params() const noexcept { return params_; }

 private:
  void check(double x) const;
  finite_sg_params params_;
  double kappa_;
  double shift_;
  double offset_;
};

/// Samples the profile on x_n = -L + (n - 1) 2L / (N - 1) with fixed-end anchors at -L - h and L + h.
classical_solution sample_finite_sg(const chain_spec& spec, const finite_sg_params& params);

}  // namespace fkent
