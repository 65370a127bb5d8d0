#pragma once

// Gaussian states with vanishing phi-pi cross correlations, stored as the two
// second-moment blocks G = <phi phi^T> and H = <pi pi^T>. All measurements
// are free functions templated on the scalar type.

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "fkent/error.hpp"
#include "fkent/modes.hpp"

namespace fkent {

inline constexpr double zero_mode_tolerance = 1e-12;
inline constexpr double symplectic_clamp = 1e-9;
/// Above this omega_max / omega_min, reduced states are assembled and diagonalized
/// in long double: in double the rounding of G grows like eps * spread.
inline constexpr double extended_precision_spread = 1e4;

template <typename Scalar>
using matrix_t = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using vector_t = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Ordered 0-based row indices into a state.
using block_selection = std::vector<int>;

template <typename Scalar = double>
struct gaussian_state {
  matrix_t<Scalar> G;
  matrix_t<Scalar> H;
  std::vector<int> labels;

  Eigen::Index size() const { return G.rows(); }
};

// -- blocks ------------------------------------------------------------------

block_selection contiguous_block(int first, int length);
/// l sites starting at floor(center - (l - 1) / 2), center in 1-based site units.
block_selection centered_block(double center, int length, int N);
block_selection complement(const block_selection& block, int N);
/// Image under n -> N + 1 - n.
block_selection mirror_block(const block_selection& block, int N);
void validate_block(const block_selection& block, Eigen::Index size);

// -- construction ------------------------------------------------------------

/// G = sum_l eta_l eta_l^T / (2 omega_l), H = sum_l eta_l eta_l^T omega_l / 2.
template <typename Scalar = double>
gaussian_state<Scalar> ground_state(const mode_basis& basis) {
  if (basis.size() == 0) throw error(errc::domain_error, "empty mode basis");
  const double wmin = basis.omega.minCoeff();
  if (!(wmin > zero_mode_tolerance))
    throw error(errc::zero_mode, "mode frequency " + std::to_string(wmin) + " at or below the zero-mode guard");
  const matrix_t<Scalar> eta = basis.eta.template cast<Scalar>();
  const vector_t<Scalar> w = basis.omega.template cast<Scalar>();
  gaussian_state<Scalar> s;
  s.G.noalias() = eta * (Scalar(0.5) * w.cwiseInverse()).asDiagonal() * eta.transpose();
  s.H.noalias() = eta * (Scalar(0.5) * w).asDiagonal() * eta.transpose();
  s.labels.resize(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) s.labels[i] = int(i);
  return s;
}

/// Rows `block` of the ground state without forming the full covariance.
template <typename Scalar = double>
gaussian_state<Scalar> reduced_ground_state(const mode_basis& basis, const block_selection& block) {
  validate_block(block, basis.size());
  const double wmin = basis.omega.minCoeff();
  if (!(wmin > zero_mode_tolerance))
    throw error(errc::zero_mode, "mode frequency " + std::to_string(wmin) + " at or below the zero-mode guard");
  const matrix_t<Scalar> rows = basis.eta(block, Eigen::all).template cast<Scalar>();
  const vector_t<Scalar> w = basis.omega.template cast<Scalar>();
  gaussian_state<Scalar> s;
  s.G.noalias() = rows * (Scalar(0.5) * w.cwiseInverse()).asDiagonal() * rows.transpose();
  s.H.noalias() = rows * (Scalar(0.5) * w).asDiagonal() * rows.transpose();
  s.labels = block;
  return s;
}

template <typename Scalar>
gaussian_state<Scalar> reduce(const gaussian_state<Scalar>& state, const block_selection& block) {
  validate_block(block, state.size());
  gaussian_state<Scalar> r;
  r.G = state.G(block, block);
  r.H = state.H(block, block);
  r.labels.reserve(block.size());
  for (int i : block) r.labels.push_back(state.labels.empty() ? i : state.labels[i]);
  return r;
}

// -- symplectic spectrum -----------------------------------------------------

/// Ascending square roots of eig(G H), from the symmetric congruence L^T H L with G = L L^T.
template <typename Scalar>
vector_t<Scalar> symplectic_eigenvalues(const gaussian_state<Scalar>& state) {
  Eigen::LLT<matrix_t<Scalar>> llt(state.G);
  if (llt.info() != Eigen::Success) throw error(errc::not_positive_definite, "G is not positive definite");
  const auto U = llt.matrixU();
  const matrix_t<Scalar> UH = U * state.H;
  matrix_t<Scalar> M = (U * UH.transpose()).transpose();
  M = Scalar(0.5) * (M + M.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<matrix_t<Scalar>> es(M, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw error(errc::not_converged, "symplectic eigensolve failed");
  if (es.eigenvalues()[0] <= 0) throw error(errc::not_positive_definite, "H is not positive definite");
  return es.eigenvalues().cwiseSqrt();
}

/// S(lambda) = (lambda + 1/2) ln(lambda + 1/2) - (lambda - 1/2) ln(lambda - 1/2).
template <typename Scalar>
Scalar mode_entropy(Scalar lambda) {
  const Scalar half(0.5);
  if (lambda < half - Scalar(symplectic_clamp))
    throw error(errc::domain_error, "symplectic eigenvalue " + std::to_string(double(lambda)) + " below 1/2");
  if (lambda <= half) return Scalar(0);
  const Scalar a = lambda + half;
  const Scalar b = lambda - half;
  return a * std::log(a) - b * std::log(b);
}

template <typename Derived>
typename Derived::Scalar entropy_of_spectrum(const Eigen::DenseBase<Derived>& lambdas) {
  using Scalar = typename Derived::Scalar;
  Scalar total(0);
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) total += mode_entropy<Scalar>(lambdas.derived().coeff(i));
  return total;
}

template <typename Scalar>
Scalar entanglement_entropy(const gaussian_state<Scalar>& state, const block_selection& block) {
  return entropy_of_spectrum(symplectic_eigenvalues(reduce(state, block)));
}

// -- negativity --------------------------------------------------------------

/// Partial time reversal of B flips the A-B blocks of H; sums -ln(2 lambda) over lambda < 1/2.
template <typename Scalar>
Scalar log_negativity(const gaussian_state<Scalar>& state, const block_selection& A, const block_selection& B) {
  validate_block(A, state.size());
  validate_block(B, state.size());
  std::vector<int> sorted_a(A), sorted_b(B);
  std::sort(sorted_a.begin(), sorted_a.end());
  std::sort(sorted_b.begin(), sorted_b.end());
  std::vector<int> common;
  std::set_intersection(sorted_a.begin(), sorted_a.end(), sorted_b.begin(), sorted_b.end(), std::back_inserter(common));
  if (!common.empty()) throw error(errc::overlapping_blocks, "blocks share site " + std::to_string(common.front()));

  block_selection joint(A);
  joint.insert(joint.end(), B.begin(), B.end());
  gaussian_state<Scalar> pt = reduce(state, joint);
  const Eigen::Index na = Eigen::Index(A.size());
  const Eigen::Index nb = Eigen::Index(B.size());
  pt.H.topRightCorner(na, nb) *= Scalar(-1);
  pt.H.bottomLeftCorner(nb, na) *= Scalar(-1);
  const vector_t<Scalar> lambdas = symplectic_eigenvalues(pt);
  Scalar total(0);
  for (Eigen::Index i = 0; i < lambdas.size(); ++i)
    if (lambdas[i] < Scalar(0.5)) total -= std::log(Scalar(2) * lambdas[i]);
  return total;
}

// -- ground-state measurements ----------------------------------------------

/// True when the frequency spread of the basis calls for long double reductions.
bool needs_extended_precision(const mode_basis& basis);

/// E_S of a block of the ground state. Uses the smaller of the block and its
/// complement (the global state is pure) and extended precision when needed.
double ground_state_entropy(const mode_basis& basis, const block_selection& block);

/// E_LN between two disjoint blocks of the ground state.
double ground_state_log_negativity(const mode_basis& basis, const block_selection& A, const block_selection& B);

// -- participation -----------------------------------------------------------

template <typename Scalar>
struct participation {
  vector_t<Scalar> lambdas;          ///< descending
  std::vector<vector_t<Scalar>> z;   ///< z_j(n) = u_j(n) v_j(n), sum_n z_j(n) = 1
  bool degenerate = false;           ///< some lambda gap below 1e-10; z basis not unique
};

/// H_A G_A u = lambda^2 u, G_A H_A v = lambda^2 v with u^T v = 1 and the largest |u| entry positive.
template <typename Scalar>
participation<Scalar> participation_functions(const gaussian_state<Scalar>& state, const block_selection& A) {
  if (A.empty() || Eigen::Index(A.size()) >= state.size())
    throw error(errc::invalid_partition, "participation needs a proper nonempty block");
  const gaussian_state<Scalar> r = reduce(state, A);
  Eigen::LLT<matrix_t<Scalar>> llt(r.G);
  if (llt.info() != Eigen::Success) throw error(errc::not_positive_definite, "G_A is not positive definite");
  const matrix_t<Scalar> L = llt.matrixL();
  matrix_t<Scalar> M = L.transpose() * r.H * L;
  M = Scalar(0.5) * (M + M.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<matrix_t<Scalar>> es(M);
  const Eigen::Index n = M.rows();

  participation<Scalar> p;
  p.lambdas.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = n - 1 - j;
    const vector_t<Scalar> w = es.eigenvectors().col(src);
    vector_t<Scalar> u = llt.matrixU().solve(w);
    vector_t<Scalar> v = L * w;
    Eigen::Index peak = 0;
    u.cwiseAbs().maxCoeff(&peak);
    if (u[peak] < 0) {
      u = -u;
      v = -v;
    }
    p.lambdas[j] = std::sqrt(std::max(es.eigenvalues()[src], Scalar(0)));
    p.z.push_back(u.cwiseProduct(v));
  }
  for (Eigen::Index j = 0; j + 1 < n; ++j)
    if (p.lambdas[j] - p.lambdas[j + 1] < Scalar(1e-10)) p.degenerate = true;
  return p;
}

// -- correlations ------------------------------------------------------------

template <typename Scalar>
struct correlation {
  vector_t<Scalar> xi;  ///< G(ref, ref + n)
  vector_t<Scalar> nu;  ///< H(ref, ref + n)
};

template <typename Scalar>
correlation<Scalar> correlation_profile(const gaussian_state<Scalar>& state, int ref) {
  if (ref < 0 || ref >= state.size()) throw error(errc::domain_error, "reference row out of range");
  const Eigen::Index count = state.size() - ref;
  return {state.G.row(ref).segment(ref, count).transpose(), state.H.row(ref).segment(ref, count).transpose()};
}

// -- two-oscillator model ----------------------------------------------------

struct toy_model {
  double lambda;          ///< (1/4) sqrt(2 + a + 1/a), a = omega2 / omega1
  double entropy;         ///< S(lambda) of either oscillator
  double log_negativity;  ///< arccosh(2 lambda) of the pure pair
};

toy_model toy_two_oscillator(double omega1, double omega2);

}  // namespace fkent
