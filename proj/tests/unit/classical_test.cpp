#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "../oracles/oracles.hpp"
#include "fkent/classical.hpp"
#include "fkent/elliptic.hpp"
#include "fkent/solution_io.hpp"

using namespace fkent;
constexpr double pi = std::numbers::pi;

namespace {

errc code_of(auto&& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  return errc::config_error;  // sentinel: nothing thrown
}

}  // namespace

TEST_CASE("substrate potential") {
  CHECK(substrate_potential(0) == 0);
  CHECK(substrate_potential(pi) == doctest::Approx(2));
  CHECK(std::abs(substrate_potential(2 * pi)) < 1e-15);
}

TEST_CASE("energy of simple configurations") {
  chain_spec spec{10, 0.0, boundary::free};
  CHECK(total_energy(spec, Eigen::VectorXd::Zero(10)) == 0);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(10);
  phi[3] = pi;
  CHECK(total_energy(spec, phi) == doctest::Approx(2));
}

TEST_CASE("gradient matches finite differences on every boundary") {
  for (auto bc : {boundary::periodic, boundary::free, boundary::fixed}) {
    chain_spec spec{7, 2.5, bc, 0.3, 5.9};
    Eigen::VectorXd phi(7);
    phi << 0.1, 0.7, 1.9, 3.0, 4.2, 5.1, 6.0;
    const Eigen::VectorXd grad = energy_gradient(spec, phi);
    for (int i = 0; i < 7; ++i) {
      Eigen::VectorXd a = phi, b = phi;
      a[i] += 1e-6;
      b[i] -= 1e-6;
      CHECK(grad[i] == doctest::Approx((total_energy(spec, a) - total_energy(spec, b)) / 2e-6).epsilon(1e-6));
    }
  }
}

TEST_CASE("vacuum solution") {
  const auto v = vacuum_solution({10, 1.0, boundary::periodic});
  CHECK(v.phi.size() == 10);
  CHECK(v.phi.isZero());
  CHECK(v.energy == 0);
  const auto r = sample_and_relax(v);
  CHECK(r.phi == v.phi);
  CHECK(r.energy == 0);
  CHECK(code_of([&] { soliton_centers(v); }) == errc::no_centers);
}

TEST_CASE("continuum soliton shape and energy") {
  const chain_spec spec{1000, 1e4, boundary::free};
  const auto s = continuum_soliton(spec);
  CHECK(s.kind == sector::single_soliton);
  const double X = 500.5;
  // pi is reached halfway between sites 500 and 501
  CHECK(0.5 * (s.phi[499] + s.phi[500]) == doctest::Approx(pi).epsilon(1e-6));
  const auto narrow = continuum_soliton({1000, 100.0, boundary::free});
  CHECK(std::abs(narrow.phi[0] - narrow.phi[999] - 2 * pi) < 1e-10);
  const auto c = soliton_centers(s);
  REQUIRE(c.size() == 1);
  CHECK(std::abs(c[0] - X) <= 0.5);

  // Continuum energy density integrated over the sampled profile.
  const double g = spec.g;
  auto density = [&](double x) {
    const double e = std::exp((x - X) / std::sqrt(g));
    const double slope = 4 / std::sqrt(g) * e / (1 + e * e);
    const double f = 4 * std::atan(e);
    return 0.5 * g * slope * slope + 1 - std::cos(f);
  };
  const double quad = oracle::simpson(density, 1, 1000);
  CHECK(s.energy == doctest::Approx(quad).epsilon(1e-3));
  CHECK(s.energy == doctest::Approx(8 * std::sqrt(g)).epsilon(1e-3));
}

TEST_CASE("soliton width at g = 3000 spans about sqrt(g) sites") {
  const auto s = continuum_soliton({1000, 3000, boundary::free});
  int first = -1, last = -1;
  for (int i = 0; i < 1000; ++i) {
    const double f = s.phi[i] / (2 * pi);
    if (first < 0 && f <= 0.9) first = i;
    if (last < 0 && f <= 0.1) last = i;
  }
  // 10%-90% of a 4 atan(exp) profile spans 2 asinh(tan(0.4 pi)) ~ 2.6 widths; one width is sqrt(g)
  const double width = (last - first) / (2 * std::asinh(std::tan(0.4 * pi)));
  CHECK(width == doctest::Approx(std::sqrt(3000.0)).epsilon(0.05));
}

TEST_CASE("weak coupling relaxes to a lower-energy kink") {
  chain_spec spec{200, 5.0, boundary::fixed};
  const auto s = continuum_soliton(spec);
  CHECK(s.kind == sector::kink);
  CHECK_FALSE(s.warnings.empty());
  relax_report report;
  relax_options opts;
  opts.record_energy = true;
  const auto r = sample_and_relax(s, opts, &report);
  CHECK(r.energy < s.energy);
  CHECK(energy_gradient(r.spec, r.phi).cwiseAbs().maxCoeff() < 1e-8);
  for (std::size_t i = 1; i < report.energy_trace.size(); ++i)
    CHECK(report.energy_trace[i] <= report.energy_trace[i - 1]);
}

TEST_CASE("bifurcation points") {
  const auto m = bifurcation_points(8.0, 3);
  REQUIRE(m.size() == 3);
  CHECK(m[0] > m[1]);
  CHECK(m[1] > m[2]);
  for (int s = 1; s <= 3; ++s) {
    const double K = elliptic::complete_K(elliptic::modulus<double>::from_parameter(m[s - 1]));
    CHECK(std::abs(s * K - 8.0) < 1e-10);
  }
  CHECK(code_of([] { bifurcation_points(8.0, 6); }) == errc::no_root);
}

TEST_CASE("stability windows at 2L = 16") {
  const auto w1 = stability_window_H(8.0, 1);
  const auto w2 = stability_window_H(8.0, 2);
  CHECK(std::abs(w1.lower - 0.0019) < 1e-3);
  CHECK(std::abs(w1.upper - 1.0052) < 1e-3);
  CHECK(std::abs(w2.lower - 0.1023) < 1e-3);
  CHECK(std::abs(w2.upper - 1.0622) < 1e-3);
  CHECK(w2.lower == doctest::Approx(std::sqrt(w1.upper * w1.upper - 1)));
}

TEST_CASE("k_from_H round trip") {
  for (int sigma : {1, 2}) {
    const auto w = stability_window_H(8.0, sigma);
    const double H = 0.5 * (w.lower + w.upper);
    const double m = k_from_H(8.0, sigma, H);
    CHECK(std::abs(boundary_field(8.0, sigma, m) - H) < 1e-9);
  }
  CHECK(code_of([] { k_from_H(8.0, 1, 2.0); }) == errc::no_root);
}

TEST_CASE("finite junction profile solves the boundary problem") {
  for (int sigma : {1, 2}) {
    const auto [lo, hi] = stability_interval(8.0, sigma);
    const auto p = make_finite_sg_params(8.0, sigma, 0.5 * (lo + hi));
    const finite_sg_profile f(p);
    const double h = 1e-4;
    CHECK(std::abs((f(8.0) - f(8.0 - h)) / h - 2 * p.H) < 1e-3);
    CHECK(std::abs(f.slope(8.0) - 2 * p.H) < 1e-9);
    CHECK(std::abs(f.slope(-8.0) - 2 * p.H) < 1e-9);
    for (double x = -7.5; x <= 7.5; x += 0.5) {
      const double d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
      CHECK(std::abs(d2 - std::sin(f(x))) < 1e-4);
    }
    CHECK(code_of([&] { f(8.5); }) == errc::domain_error);
  }
  const auto p2 = make_finite_sg_params(8.0, 2, 0.9415);
  const finite_sg_profile f2(p2);
  CHECK(f2(8.0) - f2(-8.0) > 3 * pi);
}

TEST_CASE("sampled double junction has symmetric cores") {
  const auto s = sample_finite_sg({1000, 3000}, make_finite_sg_params(8.0, 2, 0.9415));
  REQUIRE(s.centers.size() == 2);
  CHECK(std::abs(s.centers[0] + s.centers[1] - 1001) < 1.0);
  CHECK(s.spec.bc == boundary::fixed);
}

TEST_CASE("solution record round trip is bit exact") {
  auto s = sample_finite_sg({50, 30.0}, make_finite_sg_params(8.0, 2, 0.95));
  s.warnings.clear();
  std::stringstream buf;
  write_solution(buf, s);
  const auto r = read_solution(buf);
  CHECK(r.spec.N == s.spec.N);
  CHECK(r.spec.g == s.spec.g);
  CHECK(r.spec.bc == s.spec.bc);
  CHECK(r.spec.left_anchor == s.spec.left_anchor);
  CHECK(r.spec.right_anchor == s.spec.right_anchor);
  CHECK(r.kind == s.kind);
  CHECK(r.energy == s.energy);
  CHECK(r.centers == s.centers);
  CHECK(r.params == s.params);
  CHECK(r.phi == s.phi);

  std::stringstream bad("fkent-solution 1\nN 3\n");
  CHECK(code_of([&] { read_solution(bad); }) == errc::config_error);
}
