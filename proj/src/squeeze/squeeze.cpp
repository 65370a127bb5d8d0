#include "fkent/squeeze.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCore>

namespace fkent {

bool mode_frame_system::ground_form(double tol) const {
  auto off_diagonal = [](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd c = m;
    c.diagonal().setZero();
    return c.cwiseAbs().maxCoeff();
  };
  const double scale = std::max(moments.G.cwiseAbs().maxCoeff(), moments.H.cwiseAbs().maxCoeff());
  return off_diagonal(moments.G) <= tol * scale && off_diagonal(moments.H) <= tol * scale;
}

mode_frame_system normal_mode_system(const mode_basis& basis) {
  if (!(basis.omega.minCoeff() > zero_mode_tolerance)) throw error(errc::zero_mode, "zero mode in basis");
  mode_frame_system s;
  s.basis = basis;
  s.moments.G = (0.5 * basis.omega.cwiseInverse()).asDiagonal();
  s.moments.H = (0.5 * basis.omega).asDiagonal();
  s.moments.labels.resize(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) s.moments.labels[i] = int(i);
  return s;
}

mode_frame_system append_external_mode(const mode_frame_system& system, external_mode q) {
  if (!(q.omega_Q > 0)) throw error(errc::domain_error, "external frequency must be positive");
  mode_frame_system s = system;
  const Eigen::Index n = system.size();
  s.moments.G.conservativeResize(n + 1, n + 1);
  s.moments.H.conservativeResize(n + 1, n + 1);
  s.moments.G.row(n).setZero();
  s.moments.G.col(n).setZero();
  s.moments.H.row(n).setZero();
  s.moments.H.col(n).setZero();
  s.moments.G(n, n) = 0.5 / q.omega_Q;
  s.moments.H(n, n) = 0.5 * q.omega_Q;
  s.moments.labels.push_back(int(n));
  s.external.push_back(q.omega_Q);
  return s;
}

mode_frame_system append_external_mode(const mode_basis& basis, external_mode q) {
  return append_external_mode(normal_mode_system(basis), q);
}

gaussian_state<double> site_state(const mode_frame_system& system) {
  const Eigen::Index n = system.chain_size();
  const Eigen::Index e = system.size() - n;
  const Eigen::MatrixXd& eta = system.basis.eta;
  auto transform = [&](const Eigen::MatrixXd& m) {
    Eigen::MatrixXd out(n + e, n + e);
    out.topLeftCorner(n, n).noalias() = eta * m.topLeftCorner(n, n) * eta.transpose();
    if (e > 0) {
      out.topRightCorner(n, e).noalias() = eta * m.topRightCorner(n, e);
      out.bottomLeftCorner(e, n) = out.topRightCorner(n, e).transpose();
      out.bottomRightCorner(e, e) = m.bottomRightCorner(e, e);
    }
    return out;
  };
  gaussian_state<double> s;
  s.G = transform(system.moments.G);
  s.H = transform(system.moments.H);
  s.labels.resize(n + e);
  for (Eigen::Index i = 0; i < n + e; ++i) s.labels[i] = int(i);
  return s;
}

template <typename Scalar>
gaussian_state<Scalar> reduced_site_state(const mode_frame_system& system, const block_selection& block) {
  const Eigen::Index n = system.chain_size();
  const Eigen::Index total = system.size();
  validate_block(block, total);
  const Eigen::Index k = Eigen::Index(block.size());
  matrix_t<Scalar> rows = matrix_t<Scalar>::Zero(k, total);
  for (Eigen::Index i = 0; i < k; ++i) {
    if (block[i] < n)
      rows.row(i).head(n) = system.basis.eta.row(block[i]).template cast<Scalar>();
    else
      rows(i, block[i]) = Scalar(1);
  }
  // Mode-frame moments stay sparse: diagonal plus the rows and columns a squeeze touched.
  auto sandwich = [&](const Eigen::MatrixXd& m) {
    const Eigen::SparseMatrix<Scalar> sparse = m.template cast<Scalar>().sparseView();
    const matrix_t<Scalar> left = rows * sparse;
    matrix_t<Scalar> out = left * rows.transpose();
    return matrix_t<Scalar>(Scalar(0.5) * (out + out.transpose()));
  };
  gaussian_state<Scalar> s;
  s.G = sandwich(system.moments.G);
  s.H = sandwich(system.moments.H);
  s.labels = block;
  return s;
}

template gaussian_state<double> reduced_site_state<double>(const mode_frame_system&, const block_selection&);
template gaussian_state<long double> reduced_site_state<long double>(const mode_frame_system&,
                                                                     const block_selection&);

double site_entropy(const mode_frame_system& system, const block_selection& block) {
  const int total = int(system.size());
  validate_block(block, total);
  const block_selection& part = 2 * int(block.size()) > total ? complement(block, total) : block;
  if (part.empty()) return 0;
  double lo = system.basis.omega.minCoeff(), hi = system.basis.omega.maxCoeff();
  for (double w : system.external) {
    lo = std::min(lo, w);
    hi = std::max(hi, w);
  }
  if (hi > extended_precision_spread * lo)
    return double(entropy_of_spectrum(symplectic_eigenvalues(reduced_site_state<long double>(system, part))));
  return entropy_of_spectrum(symplectic_eigenvalues(reduced_site_state<double>(system, part)));
}

Eigen::MatrixXd phase_space_matrix(const linear_squeeze& map) {
  const Eigen::Index k = Eigen::Index(map.coordinates.size());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  s.topLeftCorner(k, k) = map.position;
  s.bottomRightCorner(k, k) = map.momentum;
  return s;
}

double symplectic_defect(const linear_squeeze& map) {
  const Eigen::Index k = Eigen::Index(map.coordinates.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * k, 2 * k);
  J.topRightCorner(k, k) = Eigen::MatrixXd::Identity(k, k);
  J.bottomLeftCorner(k, k) = -Eigen::MatrixXd::Identity(k, k);
  const Eigen::MatrixXd S = phase_space_matrix(map);
  return (S * J * S.transpose() - J).cwiseAbs().maxCoeff();
}

linear_squeeze mixing_squeeze(int mode_a, int mode_b, double r) {
  if (mode_a == mode_b) throw error(errc::domain_error, "squeeze needs two distinct modes");
  const double s = 1.0 / std::sqrt(2.0);
  const double up = std::exp(r);
  const double down = std::exp(-r);
  linear_squeeze m;
  m.coordinates = {mode_a, mode_b};
  m.position.resize(2, 2);
  m.position << s * up, s * down, s * up, -s * down;
  m.momentum.resize(2, 2);
  m.momentum << s * down, s * up, s * down, -s * up;
  return m;
}

linear_squeeze collective_squeeze(int mode_1, int mode_2, double omega_1, double omega_2, double r) {
  if (mode_1 == mode_2) throw error(errc::domain_error, "squeeze needs two distinct modes");
  if (!(omega_1 > 0 && omega_2 > 0)) throw error(errc::zero_mode, "collective squeeze needs positive frequencies");
  const double c = std::cosh(r);
  const double s = std::sinh(r);
  Eigen::Matrix2d rot;
  rot << 1, 1, 1, -1;
  rot /= std::sqrt(2.0);
  Eigen::Matrix2d sx, sp;
  sx << c, s, s, c;
  sp << c, -s, -s, c;
  const Eigen::Vector2d root(std::sqrt(omega_1), std::sqrt(omega_2));
  linear_squeeze m;
  m.coordinates = {mode_1, mode_2};
  m.position = root.cwiseInverse().asDiagonal() * rot * sx * rot * root.asDiagonal();
  m.momentum = root.asDiagonal() * rot * sp * rot * root.cwiseInverse().asDiagonal();
  return m;
}

mode_frame_system apply(const mode_frame_system& system, const linear_squeeze& map) {
  for (int c : map.coordinates)
    if (c < 0 || c >= system.size()) throw error(errc::domain_error, "squeeze touches a coordinate outside the system");
  mode_frame_system out = system;
  const auto& idx = map.coordinates;
  auto congruence = [&](Eigen::MatrixXd& m, const Eigen::MatrixXd& t) {
    const Eigen::MatrixXd rows = t * m(idx, Eigen::all);
    m(idx, Eigen::all) = rows;
    const Eigen::MatrixXd cols = m(Eigen::all, idx) * t.transpose();
    m(Eigen::all, idx) = cols;
  };
  congruence(out.moments.G, map.position);
  congruence(out.moments.H, map.momentum);
  return out;
}

mode_frame_system two_mode_squeeze(const mode_frame_system& system, const squeeze_spec& spec) {
  if (!system.ground_form()) throw error(errc::not_ground_form, "state is not diagonal in the normal-mode frame");
  return apply(system, mixing_squeeze(spec.mode_a, spec.mode_b, spec.r));
}

double inserted_entropy(double r) {
  if (!(r >= 0)) throw error(errc::domain_error, "squeezing parameter must be non-negative");
  if (r == 0) return 0;
  const double c = std::cosh(r) * std::cosh(r);
  const double s = std::sinh(r) * std::sinh(r);
  return c * std::log(c) - s * std::log(s);
}

collective_modes collective_pm_modes(const mode_basis& basis) {
  const auto classes = classify_modes(basis);
  if (classes.internal.size() < 2) throw error(errc::too_few_internal_modes, "need two internal modes");
  const Eigen::VectorXd& a = basis.eta.col(classes.internal[0]);
  const Eigen::VectorXd& b = basis.eta.col(classes.internal[1]);
  return {(a + b) / std::sqrt(2.0), (a - b) / std::sqrt(2.0)};
}

namespace {

void require_disjoint_cover(const std::vector<const block_selection*>& parts, Eigen::Index size, bool cover) {
  std::vector<char> seen(size, 0);
  for (const auto* p : parts) {
    if (p->empty()) throw error(errc::invalid_partition, "empty part");
    for (int i : *p) {
      if (i < 0 || i >= size) throw error(errc::invalid_partition, "index outside the system");
      if (seen[i]) throw error(errc::invalid_partition, "parts overlap at " + std::to_string(i));
      seen[i] = 1;
    }
  }
  if (cover && std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw error(errc::invalid_partition, "parts do not cover the system");
}

block_selection join(const block_selection& a, const block_selection& b) {
  block_selection out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

hashing_terms hashing_lower_bound(const gaussian_state<double>& state, const block_selection& A,
                                  const block_selection& B, const block_selection& Q) {
  require_disjoint_cover({&A, &B, &Q}, state.size(), true);
  hashing_terms t;
  t.entropy_A = entanglement_entropy(state, A);
  t.entropy_Q = entanglement_entropy(state, Q);
  t.entropy_B = entanglement_entropy(state, join(A, Q));
  t.bound = std::max({0.0, t.entropy_A - t.entropy_Q, t.entropy_A - t.entropy_B});
  return t;
}

hashing_terms hashing_lower_bound(const mode_frame_system& system, const block_selection& A,
                                  const block_selection& B, const block_selection& Q) {
  require_disjoint_cover({&A, &B, &Q}, system.size(), true);
  hashing_terms t;
  t.entropy_A = site_entropy(system, A);
  t.entropy_Q = site_entropy(system, Q);
  t.entropy_B = site_entropy(system, join(A, Q));
  t.bound = std::max({0.0, t.entropy_A - t.entropy_Q, t.entropy_A - t.entropy_B});
  return t;
}

mode_frame_system collective_squeeze_system(const mode_frame_system& system, double r) {
  if (!(r >= 0)) throw error(errc::domain_error, "squeezing parameter must be non-negative");
  const auto classes = classify_modes(system.basis);
  if (classes.internal.size() < 2) throw error(errc::too_few_internal_modes, "need two internal modes");
  const int m1 = classes.internal[0];
  const int m2 = classes.internal[1];
  return apply(system, collective_squeeze(m1, m2, system.basis.omega[m1], system.basis.omega[m2], r));
}

pair_terms squeezed_pair_bound(const mode_frame_system& squeezed, const block_selection& A1,
                               const block_selection& A2) {
  require_disjoint_cover({&A1, &A2}, squeezed.chain_size(), false);
  if (A1.size() != A2.size()) throw error(errc::invalid_partition, "blocks differ in size");
  pair_terms t;
  t.entropy_A1 = site_entropy(squeezed, A1);
  t.entropy_A2 = site_entropy(squeezed, A2);
  t.entropy_A12 = site_entropy(squeezed, join(A1, A2));
  t.bound = t.entropy_A1 - t.entropy_A12;
  return t;
}

pair_terms double_soliton_squeeze_bound(const mode_frame_system& system, const block_selection& A1,
                                        const block_selection& A2, double r) {
  require_disjoint_cover({&A1, &A2}, system.chain_size(), false);
  if (A1.size() != A2.size()) throw error(errc::invalid_partition, "blocks differ in size");
  return squeezed_pair_bound(collective_squeeze_system(system, r), A1, A2);
}

}  // namespace fkent
