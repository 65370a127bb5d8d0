#pragma once

#include <Eigen/Core>

namespace fkent::detail {

struct eigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Ascending eigenpairs of the symmetric tridiagonal (d, e). count < 0 means all.
eigenpairs tridiagonal_eigen(const Eigen::VectorXd& d, const Eigen::VectorXd& e, bool want_vectors, int count = -1);

eigenpairs symmetric_eigen(const Eigen::MatrixXd& a, bool want_vectors, int count = -1);

}  // namespace fkent::detail
