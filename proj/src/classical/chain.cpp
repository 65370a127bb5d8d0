#include <algorithm>
#include <cmath>
#include <numbers>

#include "fkent/classical.hpp"

namespace fkent {

std::string_view to_string(boundary b) {
  switch (b) {
    case boundary::periodic: return "periodic";
    case boundary::free: return "free";
    case boundary::fixed: return "fixed";
  }
  return "?";
}

std::string_view to_string(sector s) {
  switch (s) {
    case sector::vacuum: return "vacuum";
    case sector::single_soliton: return "single_soliton";
    case sector::double_soliton: return "double_soliton";
    case sector::kink: return "kink";
  }
  return "?";
}

boundary parse_boundary(std::string_view name) {
  if (name == "periodic") return boundary::periodic;
  if (name == "free") return boundary::free;
  if (name == "fixed") return boundary::fixed;
  throw error(errc::config_error, "unknown boundary '" + std::string(name) + "'");
}

sector parse_sector(std::string_view name) {
  if (name == "vacuum") return sector::vacuum;
  if (name == "single_soliton") return sector::single_soliton;
  if (name == "double_soliton") return sector::double_soliton;
  if (name == "kink") return sector::kink;
  throw error(errc::config_error, "unknown sector '" + std::string(name) + "'");
}

void chain_spec::validate() const {
  if (N < 2) throw error(errc::domain_error, "chain needs N >= 2, got " + std::to_string(N));
  if (!(g > 0) || !std::isfinite(g)) throw error(errc::domain_error, "coupling g must be positive");
}

double substrate_potential(double phi) { return 1.0 - std::cos(phi); }

double total_energy(const chain_spec& spec, const Eigen::Ref<const Eigen::VectorXd>& phi) {
  const Eigen::Index n = phi.size();
  double e = 0;
  for (Eigen::Index i = 0; i < n; ++i) e += substrate_potential(phi[i]);
  double bonds = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) bonds += (phi[i + 1] - phi[i]) * (phi[i + 1] - phi[i]);
  switch (spec.bc) {
    case boundary::periodic:
      bonds += (phi[0] - phi[n - 1]) * (phi[0] - phi[n - 1]);
      break;
    case boundary::fixed:
      bonds += (phi[0] - spec.left_anchor) * (phi[0] - spec.left_anchor);
      bonds += (spec.right_anchor - phi[n - 1]) * (spec.right_anchor - phi[n - 1]);
      break;
    case boundary::free:
      break;
  }
  return e + 0.5 * spec.g * bonds;
}

Eigen::VectorXd energy_gradient(const chain_spec& spec, const Eigen::Ref<const Eigen::VectorXd>& phi) {
  const Eigen::Index n = phi.size();
  Eigen::VectorXd grad = phi.array().sin();
  const double g = spec.g;
  for (Eigen::Index i = 0; i < n; ++i) {
    double left, right;
    if (i > 0) {
      left = phi[i - 1];
    } else if (spec.bc == boundary::periodic) {
      left = phi[n - 1];
    } else if (spec.bc == boundary::fixed) {
      left = spec.left_anchor;
    } else {
      left = phi[i];
    }
    if (i + 1 < n) {
      right = phi[i + 1];
    } else if (spec.bc == boundary::periodic) {
      right = phi[0];
    } else if (spec.bc == boundary::fixed) {
      right = spec.right_anchor;
    } else {
      right = phi[i];
    }
    grad[i] += g * ((phi[i] - left) + (phi[i] - right));
  }
  return grad;
}

classical_solution vacuum_solution(const chain_spec& spec) {
  spec.validate();
  classical_solution s;
  s.spec = spec;
  s.spec.left_anchor = 0;
  s.spec.right_anchor = 0;
  s.phi = Eigen::VectorXd::Zero(spec.N);
  s.kind = sector::vacuum;
  s.energy = 0;
  return s;
}

classical_solution continuum_soliton(const chain_spec& spec, std::optional<double> X, int sigma) {
  spec.validate();
  if (sigma != 1 && sigma != -1) throw error(errc::domain_error, "soliton charge must be +1 or -1");
  const double center = X.value_or(0.5 * (spec.N + 1));
  const double width = std::sqrt(spec.g);
  auto profile = [&](double n) { return 4.0 * std::atan(std::exp(-sigma * (n - center) / width)); };

  classical_solution s;
  s.spec = spec;
  s.phi.resize(spec.N);
  for (int n = 1; n <= spec.N; ++n) s.phi[n - 1] = profile(n);
  if (spec.bc == boundary::fixed) {
    s.spec.left_anchor = profile(0);
    s.spec.right_anchor = profile(spec.N + 1);
  }
  s.kind = spec.g < continuum_coupling_threshold ? sector::kink : sector::single_soliton;
  if (spec.g < continuum_coupling_threshold)
    s.warnings.push_back("coupling below the continuum threshold; profile is only a starting guess");
  s.energy = total_energy(s.spec, s.phi);
  s.centers = soliton_centers(s);
  s.params = {{"X", center}, {"sigma", double(sigma)}};
  return s;
}

namespace {

struct crossing {
  double position;
  double slope;
};

std::vector<crossing> odd_pi_crossings(const Eigen::VectorXd& phi) {
  constexpr double pi = std::numbers::pi;
  std::vector<crossing> out;
  const Eigen::Index n = phi.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = phi[i];
    const double b = i + 1 < n ? phi[i + 1] : a;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    const auto jmin = static_cast<long>(std::ceil((lo / pi - 1) / 2));
    const auto jmax = static_cast<long>(std::floor((hi / pi - 1) / 2));
    for (long j = jmin; j <= jmax; ++j) {
      const double level = (2 * j + 1) * pi;
      if (a == level) {
        out.push_back({double(i + 1), std::abs(b - a)});
      } else if ((a - level) * (b - level) < 0) {
        out.push_back({double(i + 1) + (level - a) / (b - a), std::abs(b - a)});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<double> soliton_centers(const classical_solution& solution) {
  std::vector<double> out;
  for (const auto& c : odd_pi_crossings(solution.phi)) out.push_back(c.position);
  if (out.empty()) throw error(errc::no_centers, "profile crosses no odd multiple of pi");
  return out;
}

std::vector<double> core_centers(const classical_solution& solution, int count) {
  auto all = odd_pi_crossings(solution.phi);
  if (int(all.size()) < count)
    throw error(errc::no_centers, "found " + std::to_string(all.size()) + " crossings, need " + std::to_string(count));
  std::stable_sort(all.begin(), all.end(), [](const crossing& x, const crossing& y) { return x.slope > y.slope; });
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(all[i].position);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fkent
