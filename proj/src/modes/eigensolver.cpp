#include "eigensolver.hpp"

#include <string>
#include <vector>

#include "fkent/error.hpp"

#ifdef FKENT_WITH_LAPACK
#include <cstddef>

extern "C" {
void dstevr_(const char* jobz, const char* range, const int* n, double* d, double* e, const double* vl,
             const double* vu, const int* il, const int* iu, const double* abstol, int* m, double* w, double* z,
             const int* ldz, int* isuppz, double* work, const int* lwork, int* iwork, const int* liwork, int* info,
             std::size_t, std::size_t);
}
#endif

#include <Eigen/Eigenvalues>

namespace fkent::detail {

#ifdef FKENT_WITH_LAPACK

eigenpairs tridiagonal_eigen(const Eigen::VectorXd& d_in, const Eigen::VectorXd& e_in, bool want_vectors, int count) {
  const int n = int(d_in.size());
  Eigen::VectorXd d = d_in;
  Eigen::VectorXd e(n);
  e.head(n - 1) = e_in.head(n - 1);
  e[n - 1] = 0;
  const char jobz = want_vectors ? 'V' : 'N';
  const char range = count < 0 ? 'A' : 'I';
  const int il = 1;
  const int iu = count < 0 ? n : count;
  const double vl = 0, vu = 0, abstol = 0;
  int m = 0, info = 0;
  eigenpairs out;
  out.values.resize(n);
  const int ldz = n;
  if (want_vectors) out.vectors.resize(n, count < 0 ? n : count);
  std::vector<int> isuppz(2 * std::size_t(n));
  double wq = 0;
  int iwq = 0;
  int lwork = -1, liwork = -1;
  double zdummy = 0;
  double* z = want_vectors ? out.vectors.data() : &zdummy;
  dstevr_(&jobz, &range, &n, d.data(), e.data(), &vl, &vu, &il, &iu, &abstol, &m, out.values.data(), z, &ldz,
          isuppz.data(), &wq, &lwork, &iwq, &liwork, &info, 1, 1);
  lwork = int(wq);
  liwork = iwq;
  std::vector<double> work(lwork);
  std::vector<int> iwork(liwork);
  dstevr_(&jobz, &range, &n, d.data(), e.data(), &vl, &vu, &il, &iu, &abstol, &m, out.values.data(), z, &ldz,
          isuppz.data(), work.data(), &lwork, iwork.data(), &liwork, &info, 1, 1);
  if (info != 0) throw error(errc::not_converged, "dstevr failed with info " + std::to_string(info));
  out.values.conservativeResize(m);
  return out;
}

// Householder reduction in Eigen, then the tridiagonal solver. Dense LAPACK drivers
// (dsyevr, dsyevd) lean on level-3 BLAS, whose auto-selected kernels are not
// trustworthy on every host; the tridiagonal path uses none.
eigenpairs symmetric_eigen(const Eigen::MatrixXd& a, bool want_vectors, int count) {
  const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(a);
  const Eigen::VectorXd d = tri.diagonal();
  Eigen::VectorXd e(a.rows());
  e.head(a.rows() - 1) = tri.subDiagonal();
  e[a.rows() - 1] = 0;
  eigenpairs out = tridiagonal_eigen(d, e, want_vectors, count);
  if (want_vectors) out.vectors = Eigen::MatrixXd(tri.matrixQ()) * out.vectors;
  return out;
}

#else

eigenpairs tridiagonal_eigen(const Eigen::VectorXd& d, const Eigen::VectorXd& e, bool want_vectors, int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e.head(d.size() - 1),
                            want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw error(errc::not_converged, "tridiagonal eigensolver failed");
  const Eigen::Index k = count < 0 ? d.size() : count;
  eigenpairs out;
  out.values = es.eigenvalues().head(k);
  if (want_vectors) out.vectors = es.eigenvectors().leftCols(k);
  return out;
}

eigenpairs symmetric_eigen(const Eigen::MatrixXd& a, bool want_vectors, int count) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, want_vectors ? Eigen::ComputeEigenvectors
                                                                    : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw error(errc::not_converged, "symmetric eigensolver failed");
  const Eigen::Index k = count < 0 ? a.rows() : count;
  eigenpairs out;
  out.values = es.eigenvalues().head(k);
  if (want_vectors) out.vectors = es.eigenvectors().leftCols(k);
  return out;
}

#endif

}  // namespace fkent::detail
