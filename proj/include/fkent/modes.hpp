#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "fkent/classical.hpp"

namespace fkent {

inline constexpr double instability_tolerance = 1e-9;
inline constexpr double band_edge_tolerance = 1e-6;

/// Second variation of the total energy around phi0: tridiagonal, with
/// corner couplings on a periodic chain.
struct stability_operator {
  Eigen::VectorXd diagonal;
  Eigen::VectorXd off_diagonal;
  double corner = 0;
  bool periodic = false;

  Eigen::Index size() const { return diagonal.size(); }
  Eigen::MatrixXd dense() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  double norm_inf() const;
};

stability_operator stability_matrix(const chain_spec& spec, const classical_solution& solution);
stability_operator stability_matrix(const classical_solution& solution);

/// Columns of eta are the orthonormal modes, ordered by ascending frequency.
/// Inside a degenerate cluster, modes even under n -> N + 1 - n come first;
/// each column has its largest-magnitude entry positive.
struct mode_basis {
  Eigen::MatrixXd eta;
  Eigen::VectorXd omega;
  Eigen::VectorXd omega_sq;

  Eigen::Index size() const { return omega.size(); }
};

struct mode_classification {
  std::vector<int> internal;
  std::vector<int> phonon;
};

/// Full eigendecomposition. Throws Unstable below -1e-9, clamps (-1e-9, 0) to 0.
mode_basis diagonalize(const stability_operator& B);

/// The `count` smallest eigenvalues, without vectors.
Eigen::VectorXd lowest_eigenvalues(const stability_operator& B, int count);

mode_classification classify_modes(const mode_basis& basis, double tol_band = band_edge_tolerance);

/// Largest coupling at which a relaxed single soliton on N sites keeps a mode below the band.
double g_max_scan(int N);

/// Same scan, reporting whether a given coupling still binds a mode.
bool has_internal_mode(int N, double g);

/// CSV with header `index,omega_sq,omega,class`.
void write_spectrum_csv(std::ostream& out, const mode_basis& basis, const mode_classification& classes);

}  // namespace fkent
