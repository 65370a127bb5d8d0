#pragma once

#include <vector>

#include <Eigen/Core>

#include "fkent/gaussian.hpp"
#include "fkent/modes.hpp"

namespace fkent {

struct external_mode {
  double omega_Q = 1.0;
};

/// Chain normal modes plus appended uncoupled oscillators, with second
/// moments held in the normal-mode frame: rows 0..N-1 are the chain modes
/// phi~_l, rows N.. are the external coordinates x_Q.
struct mode_frame_system {
  mode_basis basis;
  std::vector<double> external;
  gaussian_state<double> moments;

  Eigen::Index chain_size() const { return basis.size(); }
  Eigen::Index size() const { return moments.size(); }
  bool ground_form(double tol = 1e-12) const;
};

mode_frame_system normal_mode_system(const mode_basis& basis);
mode_frame_system append_external_mode(const mode_basis& basis, external_mode q);
mode_frame_system append_external_mode(const mode_frame_system& system, external_mode q);

/// Back to site coordinates: G = E G~ E^T, H = E H~ E^T with E = eta (+) identity.
gaussian_state<double> site_state(const mode_frame_system& system);

/// Rows `block` of the site-frame state, formed without the full E G~ E^T.
/// Indices past the chain address the appended external modes.
template <typename Scalar>
gaussian_state<Scalar> reduced_site_state(const mode_frame_system& system, const block_selection& block);

/// E_S of a block of the (pure) site-frame state, taken over the smaller of the
/// block and its complement, in long double when the frequency spread is wide.
double site_entropy(const mode_frame_system& system, const block_selection& block);

/// Linear canonical map on a subset of mode-frame coordinates:
/// x' = position x, p' = momentum p, momentum = position^{-T}.
struct linear_squeeze {
  std::vector<int> coordinates;
  Eigen::MatrixXd position;
  Eigen::MatrixXd momentum;
};

/// Full matrix acting on (x, p) of the touched coordinates.
Eigen::MatrixXd phase_space_matrix(const linear_squeeze& map);
/// max |S J S^T - J|.
double symplectic_defect(const linear_squeeze& map);

/// x_a -> (e^r x_a + e^-r x_b)/sqrt2, x_b -> (e^r x_a - e^-r x_b)/sqrt2 and
/// p_a -> (e^-r p_a + e^r p_b)/sqrt2, p_b -> (e^-r p_a - e^r p_b)/sqrt2.
linear_squeeze mixing_squeeze(int mode_a, int mode_b, double r);

/// Two-mode squeeze of q+- = (q1 +- q2)/sqrt2 in the dimensionless
/// quadratures q_j = sqrt(omega_j) x_j, k_j = p_j / sqrt(omega_j).
linear_squeeze collective_squeeze(int mode_1, int mode_2, double omega_1, double omega_2, double r);

mode_frame_system apply(const mode_frame_system& system, const linear_squeeze& map);

struct squeeze_spec {
  double r = 0;
  int mode_a = 0;
  int mode_b = 1;
};

/// Applies mixing_squeeze to a system in normal-mode ground form. Throws NotGroundForm otherwise.
mode_frame_system two_mode_squeeze(const mode_frame_system& system, const squeeze_spec& spec);

/// cosh^2 r ln cosh^2 r - sinh^2 r ln sinh^2 r.
double inserted_entropy(double r);

struct collective_modes {
  Eigen::VectorXd plus;
  Eigen::VectorXd minus;
};

/// (eta_1 +- eta_2) / sqrt2. Throws TooFewInternalModes.
collective_modes collective_pm_modes(const mode_basis& basis);

struct hashing_terms {
  double bound;
  double entropy_A;
  double entropy_B;  ///< evaluated as E_S(A u Q)
  double entropy_Q;  ///< equals E_S(A u B)
};

/// max{0, E_S(A) - E_S(A u B), E_S(A) - E_S(A u Q)} for a pure state split into A, B, Q.
hashing_terms hashing_lower_bound(const gaussian_state<double>& state, const block_selection& A,
                                  const block_selection& B, const block_selection& Q);
/// Same bound evaluated block by block on a pure mode-frame system.
hashing_terms hashing_lower_bound(const mode_frame_system& system, const block_selection& A,
                                  const block_selection& B, const block_selection& Q);

struct pair_terms {
  double bound;
  double entropy_A1;
  double entropy_A2;
  double entropy_A12;
};

/// The system after squeezing its two lowest internal modes collectively by r.
mode_frame_system collective_squeeze_system(const mode_frame_system& system, double r);

/// E_S(A1) - E_S(A1 u A2) on a system that already carries the squeeze.
pair_terms squeezed_pair_bound(const mode_frame_system& squeezed, const block_selection& A1,
                               const block_selection& A2);
/// Squeezes the two lowest internal modes collectively by r, then returns E_S(A1) - E_S(A1 u A2).
pair_terms double_soliton_squeeze_bound(const mode_frame_system& system, const block_selection& A1,
                                        const block_selection& A2, double r);

}  // namespace fkent
