#include <cmath>
#include <functional>
#include <numbers>

#include "fkent/classical.hpp"
#include "fkent/elliptic.hpp"

namespace fkent {

namespace {

using elliptic::modulus;

// K as a function of the complementary modulus; decreasing on (0, 1].
double K_of_complement(double kc) {
  return elliptic::complete_K(modulus<double>::from_complement(kc));
}

double K_of_parameter(double m) { return elliptic::complete_K(modulus<double>::from_parameter(m)); }

// Plain bisection; f(lo) and f(hi) must differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Root of K = target, solved in log(k') so that m close to 1 keeps full precision.
double parameter_with_K(double target) {
  constexpr double half_pi = std::numbers::pi / 2;
  if (!(target > half_pi)) throw error(errc::no_root, "K(m) = " + std::to_string(target) + " has no root in (0, 1)");
  auto f = [&](double log_kc) { return K_of_complement(std::exp(log_kc)) - target; };
  double lo = -700.0;  // K ~ 700
  if (f(lo) < 0) throw error(errc::no_root, "K(m) target beyond double range");
  const double log_kc = bisect(f, lo, 0.0);
  const double kc = std::exp(log_kc);
  return 1.0 - kc * kc;
}

double check_half_length(double L) {
  if (!(L > 0) || !std::isfinite(L)) throw error(errc::domain_error, "half-length L must be positive");
  return L;
}

}  // namespace

std::vector<double> bifurcation_points(double L, int sigma_max) {
  check_half_length(L);
  std::vector<double> out;
  for (int s = 1; s <= sigma_max; ++s) out.push_back(parameter_with_K(L / s));
  return out;
}

std::pair<double, double> stability_interval(double L, int sigma) {
  check_half_length(L);
  if (sigma < 0) throw error(errc::domain_error, "sigma must be non-negative");
  const double upper = sigma == 0 ? 1.0 : parameter_with_K(L / sigma);
  const double lower = parameter_with_K(L / (sigma + 1));
  return {lower, upper};
}

field_window stability_window_H(double L, int sigma) {
  check_half_length(L);
  if (sigma < 0) throw error(errc::domain_error, "sigma must be non-negative");
  // (s + 1) K(m = 1/H) = H L, solved for t = H - 1 on a log scale.
  auto upper_edge = [&](int s) {
    auto f = [&](double log_t) {
      const double t = std::exp(log_t);
      const double kc = std::sqrt(t / (1.0 + t));
      return (s + 1) * K_of_complement(kc) - (1.0 + t) * L;
    };
    double lo = -600.0;
    double hi = 1.0;
    if (!(f(lo) > 0)) throw error(errc::no_root, "field window edge below representable range");
    while (f(hi) > 0) {
      hi += 1.0;
      if (hi > 50) throw error(errc::no_root, "field window edge not bracketed");
    }
    return 1.0 + std::exp(bisect(f, lo, hi));
  };
  const double hi = upper_edge(sigma);
  if (sigma == 0) return {0.0, hi};
  const double prev = upper_edge(sigma - 1);
  const double t = prev - 1.0;
  return {std::sqrt(t * (2.0 + t)), hi};
}

double boundary_field(double L, int sigma, double m) {
  check_half_length(L);
  const auto mod = modulus<double>::from_parameter(m);
  if (mod.k() == 0) throw error(errc::domain_error, "boundary_field needs m > 0");
  const double kappa = mod.k();
  const double dn = elliptic::jacobi_sn_cn_dn(L / kappa, mod).dn;
  if (sigma % 2 == 1) return dn / kappa;
  return mod.complement() / (kappa * dn);
}

double k_from_H(double L, int sigma, double H) {
  const auto window = stability_window_H(L, sigma);
  if (!(H >= window.lower && H < window.upper))
    throw error(errc::no_root, "H = " + std::to_string(H) + " outside the stability window of sigma = " +
                                   std::to_string(sigma));
  const auto [lo, hi] = stability_interval(L, sigma);
  auto f = [&](double m) { return boundary_field(L, sigma, m) - H; };
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw error(errc::no_root, "H = " + std::to_string(H) + " not reached on the parameter interval");
  return bisect(f, lo, hi);
}

finite_sg_params make_finite_sg_params(double L, int sigma, double m, double x0) {
  check_half_length(L);
  if (sigma < 0) throw error(errc::domain_error, "sigma must be non-negative");
  const auto [lo, hi] = stability_interval(L, sigma);
  if (!(m > lo && m <= hi))
    throw error(errc::domain_error, "m = " + std::to_string(m) + " outside the interval of sigma = " +
                                        std::to_string(sigma));
  return {L, sigma, m, boundary_field(L, sigma, m), x0};
}

finite_sg_profile::finite_sg_profile(const finite_sg_params& params) : params_(params) {
  check_half_length(params.L);
  const auto mod = modulus<double>::from_parameter(params.m);
  if (mod.k() == 0) throw error(errc::domain_error, "profile needs m > 0");
  kappa_ = mod.k();
  constexpr double pi = std::numbers::pi;
  if (params.sigma % 2 == 1) {
    offset_ = pi * params.sigma;
    shift_ = 0;
  } else {
    offset_ = pi * (params.sigma - 1);
    shift_ = K_of_parameter(params.m);
  }
}

void finite_sg_profile::check(double x) const {
  if (!(std::abs(x) <= params_.L))
    throw error(errc::domain_error, "x = " + std::to_string(x) + " outside [-L, L]");
}

double finite_sg_profile::extended(double x) const {
  const auto mod = modulus<double>::from_parameter(params_.m);
  return offset_ + 2.0 * elliptic::jacobi_am((x - params_.x0) / kappa_ + shift_, mod);
}

double finite_sg_profile::extended_slope(double x) const {
  const auto mod = modulus<double>::from_parameter(params_.m);
  return 2.0 / kappa_ * elliptic::jacobi_sn_cn_dn((x - params_.x0) / kappa_ + shift_, mod).dn;
}

double finite_sg_profile::operator()(double x) const {
  check(x);
  return extended(x);
}

double finite_sg_profile::slope(double x) const {
  check(x);
  return extended_slope(x);
}

classical_solution sample_finite_sg(const chain_spec& spec, const finite_sg_params& params) {
  spec.validate();
  if (params.sigma < 1 || params.sigma > 2)
    throw error(errc::domain_error, "sampled junctions carry one or two cores");
  const finite_sg_profile profile(params);
  const double h = 2.0 * params.L / (spec.N - 1);

  classical_solution s;
  s.spec = spec;
  s.spec.bc = boundary::fixed;
  s.phi.resize(spec.N);
  for (int n = 0; n < spec.N; ++n) s.phi[n] = profile.extended(-params.L + n * h);
  s.spec.left_anchor = profile.extended(-params.L - h);
  s.spec.right_anchor = profile.extended(params.L + h);
  s.kind = params.sigma == 2 ? sector::double_soliton : sector::single_soliton;
  s.energy = total_energy(s.spec, s.phi);
  s.centers = core_centers(s, params.sigma);
  s.params = {{"L", params.L}, {"sigma", double(params.sigma)}, {"m", params.m},
              {"H", params.H}, {"x0", params.x0}, {"sites_per_length", 1.0 / h}};
  return s;
}

}  // namespace fkent
