#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "../oracles/oracles.hpp"
#include "fkent/classical.hpp"
#include "fkent/modes.hpp"

using namespace fkent;

TEST_CASE("periodic vacuum stability matrix") {
  const auto v = vacuum_solution({4, 1.0, boundary::periodic});
  const Eigen::MatrixXd B = stability_matrix(v).dense();
  Eigen::MatrixXd expected(4, 4);
  expected << 3, -1, 0, -1, -1, 3, -1, 0, 0, -1, 3, -1, -1, 0, -1, 3;
  CHECK(B == expected);
  CHECK(B.rowwise().sum().isApprox(Eigen::VectorXd::Ones(4)));
}

TEST_CASE("soliton core row has diagonal 2g - 1") {
  const chain_spec spec{101, 50.0, boundary::free};
  const auto s = continuum_soliton(spec, 51.0);
  const auto B = stability_matrix(s);
  CHECK(B.diagonal[50] == doctest::Approx(2 * 50.0 - 1));
  CHECK(B.diagonal[0] == doctest::Approx(50.0 + std::cos(s.phi[0])));
}

TEST_CASE("vacuum ring spectrum matches the phonon dispersion") {
  for (double g : {1e2, 1e4}) {
    const auto basis = diagonalize(stability_matrix(vacuum_solution({1000, g, boundary::periodic})));
    std::vector<double> exact(1000);
    for (int l = 0; l < 1000; ++l) exact[l] = oracle::ring_omega_sq(l, 1000, g);
    std::sort(exact.begin(), exact.end());
    double worst = 0;
    for (int l = 0; l < 1000; ++l) worst = std::max(worst, std::abs(basis.omega_sq[l] - exact[l]));
    CHECK(worst < 1e-10);
    CHECK(classify_modes(basis).internal.empty());
  }
}

TEST_CASE("mode basis is orthonormal and sorted") {
  const chain_spec spec{300, 400.0, boundary::fixed};
  const auto basis = diagonalize(stability_matrix(sample_and_relax(continuum_soliton(spec))));
  const Eigen::MatrixXd gram = basis.eta.transpose() * basis.eta;
  CHECK((gram - Eigen::MatrixXd::Identity(300, 300)).cwiseAbs().maxCoeff() < 1e-10);
  for (int l = 1; l < 300; ++l) CHECK(basis.omega[l] >= basis.omega[l - 1]);
  const auto c = classify_modes(basis);
  CHECK(c.internal.size() + c.phonon.size() == 300);
  for (int l : c.internal) CHECK(basis.omega_sq[l] < 1.0);
}

TEST_CASE("full-size ring basis is orthonormal") {
  for (double g : {1e2, 1e10}) {
    const auto basis = diagonalize(stability_matrix(vacuum_solution({1000, g, boundary::periodic})));
    const Eigen::MatrixXd gram = basis.eta.transpose() * basis.eta;
    CHECK((gram - Eigen::MatrixXd::Identity(1000, 1000)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("degenerate ring pairs come reflection-even first") {
  const auto basis = diagonalize(stability_matrix(vacuum_solution({12, 3.0, boundary::periodic})));
  // modes 1 and 2 share omega; the first is symmetric under n -> N - 1 - n
  const Eigen::VectorXd even = basis.eta.col(1);
  CHECK((even - even.reverse()).norm() < 1e-10);
  const Eigen::VectorXd odd = basis.eta.col(2);
  CHECK((odd + odd.reverse()).norm() < 1e-10);
}

TEST_CASE("internal modes by sector") {
  const chain_spec spec{1000, 1e4, boundary::fixed};
  const auto single = sample_and_relax(continuum_soliton(spec));
  CHECK(classify_modes(diagonalize(stability_matrix(single))).internal.size() == 1);
  const auto dbl = sample_and_relax(sample_finite_sg(spec, make_finite_sg_params(8.0, 2, 0.9415)));
  CHECK(classify_modes(diagonalize(stability_matrix(dbl))).internal.size() == 2);
}

TEST_CASE("unstable background is rejected") {
  const chain_spec spec{50, 10.0, boundary::free};
  Eigen::VectorXd phi = Eigen::VectorXd::Constant(50, 3.14159);
  classical_solution s = vacuum_solution(spec);
  s.phi = phi;
  try {
    diagonalize(stability_matrix(s));
    FAIL("expected Unstable");
  } catch (const error& e) {
    CHECK(e.code() == errc::unstable);
  }
}

TEST_CASE("lowest eigenvalues agree with the full decomposition") {
  const chain_spec spec{400, 900.0, boundary::fixed};
  const auto B = stability_matrix(sample_and_relax(continuum_soliton(spec)));
  const auto full = diagonalize(B);
  const Eigen::VectorXd low = lowest_eigenvalues(B, 3);
  for (int i = 0; i < 3; ++i) CHECK(low[i] == doctest::Approx(full.omega_sq[i]).epsilon(1e-10));
}

TEST_CASE("g_max of the internal translation mode") {
  const double g1000 = g_max_scan(1000);
  CHECK(g1000 > 1.3e5 / 1.5);
  CHECK(g1000 < 1.3e5 * 1.5);
  CHECK_FALSE(has_internal_mode(1000, g1000 * 1.02));
  CHECK(g_max_scan(500) < g1000);
}

TEST_CASE("spectrum csv") {
  const auto basis = diagonalize(stability_matrix(vacuum_solution({3, 1.0, boundary::periodic})));
  std::ostringstream out;
  write_spectrum_csv(out, basis, classify_modes(basis));
  std::istringstream in(out.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "index,omega_sq,omega,class");
  double w2 = 0, w = 0;
  char cls[16] = {};
  CHECK(std::sscanf(row.c_str(), "1,%lf,%lf,%15s", &w2, &w, cls) == 3);
  CHECK(w2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(w == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::string(cls) == "phonon");
}
