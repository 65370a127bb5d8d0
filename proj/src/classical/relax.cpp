#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "fkent/classical.hpp"

namespace fkent {

namespace {

// Hessian of the total energy plus a Levenberg shift.
Eigen::SparseMatrix<double> shifted_hessian(const chain_spec& spec, const Eigen::VectorXd& phi, double shift) {
  const int n = int(phi.size());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(3 * n + 2);
  for (int i = 0; i < n; ++i) {
    double d = 2 * spec.g + std::cos(phi[i]) + shift;
    if (spec.bc == boundary::free && (i == 0 || i == n - 1)) d -= spec.g;
    t.emplace_back(i, i, d);
    if (i + 1 < n) {
      t.emplace_back(i, i + 1, -spec.g);
      t.emplace_back(i + 1, i, -spec.g);
    }
  }
  if (spec.bc == boundary::periodic && n > 2) {
    t.emplace_back(0, n - 1, -spec.g);
    t.emplace_back(n - 1, 0, -spec.g);
  }
  Eigen::SparseMatrix<double> h(n, n);
  h.setFromTriplets(t.begin(), t.end());
  return h;
}

// E(b) - E(a) summed term by term, so small decreases are not lost in the
// rounding of the total.
double energy_change(const chain_spec& spec, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::Index n = a.size();
  double site = 0;
  for (Eigen::Index i = 0; i < n; ++i) site += 2 * std::sin(0.5 * (a[i] + b[i])) * std::sin(0.5 * (b[i] - a[i]));
  auto bond = [](double a0, double a1, double b0, double b1) {
    const double da = a1 - a0;
    const double db = b1 - b0;
    return (db - da) * (db + da);
  };
  double bonds = 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i) bonds += bond(a[i], a[i + 1], b[i], b[i + 1]);
  if (spec.bc == boundary::periodic && n > 2) bonds += bond(a[n - 1], a[0], b[n - 1], b[0]);
  if (spec.bc == boundary::fixed) {
    bonds += bond(spec.left_anchor, a[0], spec.left_anchor, b[0]);
    bonds += bond(a[n - 1], spec.right_anchor, b[n - 1], spec.right_anchor);
  }
  return site + 0.5 * spec.g * bonds;
}

sector infer_sector(const classical_solution& s) {
  std::vector<double> c;
  try {
    c = soliton_centers(s);
  } catch (const error&) {
    return sector::vacuum;
  }
  if (c.size() >= 2) return sector::double_soliton;
  return s.spec.g < continuum_coupling_threshold ? sector::kink : sector::single_soliton;
}

}  // namespace

double relax_tolerance(const chain_spec& spec, const Eigen::Ref<const Eigen::VectorXd>& phi, double requested) {
  const double scale = std::max(1.0, phi.size() ? phi.cwiseAbs().maxCoeff() : 0.0);
  return std::max(requested, 8 * std::numeric_limits<double>::epsilon() * spec.g * scale);
}

classical_solution sample_and_relax(const chain_spec& spec, const Eigen::VectorXd& initial,
                                    const relax_options& options, relax_report* report) {
  spec.validate();
  if (initial.size() != spec.N)
    throw error(errc::domain_error, "initial profile has " + std::to_string(initial.size()) + " sites, chain has " +
                                        std::to_string(spec.N));

  Eigen::VectorXd phi = initial;
  double energy = total_energy(spec, phi);
  const double tol = relax_tolerance(spec, phi, options.tolerance);
  relax_report log;
  log.tolerance = tol;
  if (options.record_energy) log.energy_trace.push_back(energy);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  double shift = 0;
  bool converged = false;
  int it = 0;
  for (; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd grad = energy_gradient(spec, phi);
    log.residual = grad.cwiseAbs().maxCoeff();
    if (log.residual < tol) {
      converged = true;
      break;
    }
    if (it == options.max_iterations) break;

    bool stepped = false;
    while (!stepped) {
      solver.compute(shifted_hessian(spec, phi, shift));
      if (solver.info() != Eigen::Success || (solver.vectorD().array() <= 0).any()) {
        shift = std::max(2 * shift, 1e-6);
        continue;
      }
      const Eigen::VectorXd step = solver.solve(grad);
      Eigen::VectorXd trial;
      double change = 0;
      for (double t = 1.0; t > 1e-12; t *= 0.5) {
        trial = phi - t * step;
        change = energy_change(spec, phi, trial);
        if (change <= 0) {
          stepped = true;
          break;
        }
      }
      if (stepped) {
        phi = std::move(trial);
        energy += change;
        if (options.record_energy) log.energy_trace.push_back(energy);
      } else {
        shift = std::max(4 * shift, 1e-6);
        if (shift > 1e12 * std::max(1.0, spec.g)) break;
      }
    }
    if (!stepped) break;
    shift = shift > 1e-12 ? 0.3 * shift : 0.0;
  }
  log.iterations = it;
  if (report) *report = log;
  if (!converged) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "relaxation stopped at gradient %.3e after %d iterations (tolerance %.3e)",
                  log.residual, it, tol);
    throw error(errc::not_converged, msg);
  }

  // Stability: the Hessian shifted by 1e-9 must be positive definite.
  solver.compute(shifted_hessian(spec, phi, 1e-9));
  if (solver.info() != Eigen::Success || (solver.vectorD().array() <= 0).any())
    throw error(errc::unstable, "relaxed configuration has a curvature below -1e-9");

  classical_solution s;
  s.spec = spec;
  s.phi = std::move(phi);
  s.energy = total_energy(spec, s.phi);
  s.kind = infer_sector(s);
  if (s.kind != sector::vacuum) s.centers = soliton_centers(s);
  return s;
}

classical_solution sample_and_relax(const classical_solution& initial, const relax_options& options,
                                    relax_report* report) {
  classical_solution s = sample_and_relax(initial.spec, initial.phi, options, report);
  if (initial.kind != sector::vacuum) {
    s.kind = initial.kind;
    s.centers = initial.kind == sector::double_soliton ? core_centers(s, 2) : core_centers(s, 1);
  }
  s.params = initial.params;
  s.warnings = initial.warnings;
  return s;
}

}  // namespace fkent
