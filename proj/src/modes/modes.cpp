#include "fkent/modes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "eigensolver.hpp"

namespace fkent {

Eigen::MatrixXd stability_operator::dense() const {
  const Eigen::Index n = size();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  b.diagonal() = diagonal;
  if (n > 1) {
    b.diagonal(1) = off_diagonal;
    b.diagonal(-1) = off_diagonal;
  }
  if (periodic && n > 1) {
    b(0, n - 1) += corner;
    b(n - 1, 0) += corner;
  }
  return b;
}

Eigen::VectorXd stability_operator::apply(const Eigen::VectorXd& v) const {
  const Eigen::Index n = size();
  Eigen::VectorXd out = diagonal.cwiseProduct(v);
  if (n > 1) {
    out.head(n - 1) += off_diagonal.cwiseProduct(v.tail(n - 1));
    out.tail(n - 1) += off_diagonal.cwiseProduct(v.head(n - 1));
  }
  if (periodic && n > 1) {
    out[0] += corner * v[n - 1];
    out[n - 1] += corner * v[0];
  }
  return out;
}

double stability_operator::norm_inf() const {
  const Eigen::Index n = size();
  Eigen::VectorXd rows = diagonal.cwiseAbs();
  if (n > 1) {
    rows.head(n - 1) += off_diagonal.cwiseAbs();
    rows.tail(n - 1) += off_diagonal.cwiseAbs();
  }
  if (periodic && n > 1) {
    rows[0] += std::abs(corner);
    rows[n - 1] += std::abs(corner);
  }
  return rows.maxCoeff();
}

stability_operator stability_matrix(const chain_spec& spec, const classical_solution& solution) {
  spec.validate();
  if (solution.phi.size() != spec.N) throw error(errc::domain_error, "solution length differs from chain size");
  stability_operator b;
  const int n = spec.N;
  b.diagonal = (solution.phi.array().cos() + 2 * spec.g).matrix();
  if (spec.bc == boundary::free) {
    b.diagonal[0] -= spec.g;
    b.diagonal[n - 1] -= spec.g;
  }
  b.off_diagonal = Eigen::VectorXd::Constant(n - 1, -spec.g);
  b.periodic = spec.bc == boundary::periodic;
  b.corner = b.periodic ? -spec.g : 0.0;
  return b;
}

stability_operator stability_matrix(const classical_solution& solution) {
  return stability_matrix(solution.spec, solution);
}

namespace {

// Rotates each degenerate cluster so that reflection-even combinations come first.
void order_degenerate_clusters(Eigen::MatrixXd& vectors, const Eigen::VectorXd& values, double tol) {
  const Eigen::Index n = values.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && values[end] - values[end - 1] <= tol) ++end;
    const Eigen::Index k = end - start;
    if (k > 1) {
      const Eigen::MatrixXd v = vectors.middleCols(start, k);
      const Eigen::MatrixXd reflected = v.colwise().reverse();
      const Eigen::MatrixXd parity = v.transpose() * reflected;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (parity + parity.transpose()));
      // Ascending parity eigenvalues; reverse for even-first.
      vectors.middleCols(start, k) = v * es.eigenvectors().rowwise().reverse();
    }
    start = end;
  }
}

void fix_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    auto col = vectors.col(j);
    const double peak = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col[i]) >= (1 - 1e-9) * peak) {
        if (col[i] < 0) col *= -1;
        break;
      }
    }
  }
}

}  // namespace

mode_basis diagonalize(const stability_operator& B) {
  detail::eigenpairs ep = B.periodic ? detail::symmetric_eigen(B.dense(), true)
                                     : detail::tridiagonal_eigen(B.diagonal, B.off_diagonal, true);
  if (ep.values.size() != B.size()) throw error(errc::not_converged, "eigensolver returned a partial spectrum");
  if (ep.values[0] < -instability_tolerance)
    throw error(errc::unstable, "negative curvature omega^2 = " + std::to_string(ep.values[0]));

  const double tol = 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, B.norm_inf());
  order_degenerate_clusters(ep.vectors, ep.values, tol);
  fix_signs(ep.vectors);

  mode_basis basis;
  basis.omega_sq = ep.values;
  basis.omega = ep.values.cwiseMax(0.0).cwiseSqrt();
  basis.eta = std::move(ep.vectors);
  return basis;
}

Eigen::VectorXd lowest_eigenvalues(const stability_operator& B, int count) {
  if (count < 1 || count > B.size()) throw error(errc::domain_error, "eigenvalue count out of range");
  return B.periodic ? detail::symmetric_eigen(B.dense(), false, count).values
                    : detail::tridiagonal_eigen(B.diagonal, B.off_diagonal, false, count).values;
}

mode_classification classify_modes(const mode_basis& basis, double tol_band) {
  mode_classification c;
  for (Eigen::Index l = 0; l < basis.size(); ++l) {
    if (basis.omega_sq[l] < 1.0 - tol_band) {
      c.internal.push_back(int(l));
    } else {
      c.phonon.push_back(int(l));
    }
  }
  return c;
}

bool has_internal_mode(int N, double g) {
  chain_spec spec{N, g, boundary::fixed};
  const auto relaxed = sample_and_relax(continuum_soliton(spec));
  return lowest_eigenvalues(stability_matrix(relaxed), 1)[0] < 1.0 - band_edge_tolerance;
}

double g_max_scan(int N) {
  if (N < 100) throw error(errc::domain_error, "g_max scan needs N >= 100");
  double lo = 100.0;
  while (!has_internal_mode(N, lo)) {
    lo /= 2;
    if (lo < continuum_coupling_threshold) throw error(errc::no_root, "no internal mode at any continuum coupling");
  }
  double hi = 2 * lo;
  while (has_internal_mode(N, hi)) {
    lo = hi;
    hi *= 2;
    if (hi > 1e12) throw error(errc::no_root, "internal mode persists beyond g = 1e12");
  }
  while (hi / lo > 1.01) {
    const double mid = std::sqrt(lo * hi);
    if (has_internal_mode(N, mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void write_spectrum_csv(std::ostream& out, const mode_basis& basis, const mode_classification& classes) {
  std::vector<char> internal(basis.size(), 0);
  for (int l : classes.internal) internal[l] = 1;
  auto exact = [](double v) {
    char buf[64];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
  };
  out << "index,omega_sq,omega,class\n";
  for (Eigen::Index l = 0; l < basis.size(); ++l) {
    out << (l + 1) << ',' << exact(basis.omega_sq[l]) << ',' << exact(basis.omega[l]) << ','
        << (internal[l] ? "internal" : "phonon") << '\n';
  }
}

}  // namespace fkent
