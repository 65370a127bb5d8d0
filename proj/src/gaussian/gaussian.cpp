#include "fkent/gaussian.hpp"

#include <cmath>
#include <string>

namespace fkent {

block_selection contiguous_block(int first, int length) {
  if (length < 0) throw error(errc::domain_error, "negative block length");
  block_selection b(length);
  for (int i = 0; i < length; ++i) b[i] = first + i;
  return b;
}

block_selection centered_block(double center, int length, int N) {
  const int first_site = int(std::floor(center - 0.5 * (length - 1) + 1e-9));
  block_selection b = contiguous_block(first_site - 1, length);
  validate_block(b, N);
  return b;
}

block_selection complement(const block_selection& block, int N) {
  std::vector<char> in(N, 0);
  for (int i : block) {
    if (i < 0 || i >= N) throw error(errc::domain_error, "block index out of range");
    in[i] = 1;
  }
  block_selection out;
  for (int i = 0; i < N; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

block_selection mirror_block(const block_selection& block, int N) {
  block_selection out;
  out.reserve(block.size());
  for (auto it = block.rbegin(); it != block.rend(); ++it) out.push_back(N - 1 - *it);
  return out;
}

void validate_block(const block_selection& block, Eigen::Index size) {
  std::vector<char> seen(size, 0);
  for (int i : block) {
    if (i < 0 || i >= size)
      throw error(errc::domain_error, "block index " + std::to_string(i) + " outside [0, " + std::to_string(size) + ")");
    if (seen[i]) throw error(errc::domain_error, "block repeats index " + std::to_string(i));
    seen[i] = 1;
  }
}

toy_model toy_two_oscillator(double omega1, double omega2) {
  if (!(omega1 > 0 && omega1 <= omega2)) throw error(errc::domain_error, "need 0 < omega1 <= omega2");
  const double a = omega2 / omega1;
  const double lambda = 0.25 * std::sqrt(2 + a + 1 / a);
  return {lambda, mode_entropy(lambda), std::acosh(2 * lambda)};
}

}  // namespace fkent

namespace fkent {

bool needs_extended_precision(const mode_basis& basis) {
  return basis.omega.maxCoeff() > extended_precision_spread * basis.omega.minCoeff();
}

double ground_state_entropy(const mode_basis& basis, const block_selection& block) {
  validate_block(block, basis.size());
  const int N = int(basis.size());
  const block_selection& part = 2 * int(block.size()) > N ? complement(block, N) : block;
  if (part.empty()) return 0;
  if (needs_extended_precision(basis))
    return double(entropy_of_spectrum(symplectic_eigenvalues(reduced_ground_state<long double>(basis, part))));
  return entropy_of_spectrum(symplectic_eigenvalues(reduced_ground_state<double>(basis, part)));
}

double ground_state_log_negativity(const mode_basis& basis, const block_selection& A, const block_selection& B) {
  block_selection joint(A);
  joint.insert(joint.end(), B.begin(), B.end());
  block_selection a(A.size()), b(B.size());
  for (std::size_t i = 0; i < A.size(); ++i) a[i] = int(i);
  for (std::size_t i = 0; i < B.size(); ++i) b[i] = int(A.size() + i);
  if (needs_extended_precision(basis))
    return double(log_negativity(reduced_ground_state<long double>(basis, joint), a, b));
  return log_negativity(reduced_ground_state<double>(basis, joint), a, b);
}

}  // namespace fkent
