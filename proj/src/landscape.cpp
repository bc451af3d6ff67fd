/* Copyright 2026 The qclandscape Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "qcl/landscape.hpp"

#include <cmath>
#include <string>

#include "qcl/linalg.hpp"
#include "qcl/parallel.hpp"

namespace qcl {

namespace {

constexpr double kImagTolerance = 1e-10;

void check_imag(double residue, const char* what) {
  if (residue > kImagTolerance) {
    throw NumericalError(std::string(what) + ": imaginary residue " + std::to_string(residue) +
                         " exceeds tolerance");
  }
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

// Shared adjoint pass. `commutator` is the anti-Hermitian K with
// dJ = tr(U^dagger(T) dU(T) K) for a unitary-preserving perturbation dU.
// For each step j the exact derivative of J with respect to the step's field
// value follows from the Daleckii-Krein formula for d exp(-i dt H)/dE:
//   dJ/dEbar_j = tr(P_j^dagger dP_j U_j K U_j^dagger).
// The per-step values are mapped onto grid points (each grid value enters the
// two adjacent step averages with weight 1/2) and divided by the trapezoidal
// weight, which turns partial derivatives into kernel values.
template <int MaxN>
RVector step_derivatives(const QuantumSystem& system, const TimeGrid& grid, const DetailedPropagation& prop,
                         const CMatrix& commutator, double& residue) {
  using RM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, MaxN, MaxN>;
  using CM = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, MaxN, MaxN>;
  using CV = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, MaxN, 1>;
  const int n = system.n_levels;
  const int steps = grid.n_points - 1;
  const double dt = grid.dt();
  const RM mu = system.dipole;
  const CM k = commutator;

  RVector out(steps);
  residue = 0.0;
  CM gk(n, n), ct(n, n);
  RM vmu(n, n), kmu(n, n);
  CV phase(n);
  for (int j = 0; j < steps; ++j) {
    const StepSpectrum& spec = prop.steps[j];
    const CM g = prop.rotated[j];
    gk.noalias() = g * k;
    ct.noalias() = gk * g.adjoint();
    vmu.noalias() = spec.vectors.transpose() * mu;
    kmu.noalias() = vmu * spec.vectors;
    for (int a = 0; a < n; ++a) phase[a] = Complex(std::cos(dt * spec.energies[a]), std::sin(dt * spec.energies[a]));
    Complex z = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        const double gap = spec.energies[a] - spec.energies[b];
        Complex f;
        if (std::abs(dt * gap) < 1e-3) {
          const double theta = 0.5 * dt * gap;
          f = Complex(0.0, -dt) * Complex(std::cos(theta), std::sin(theta)) * sinc(theta);
        } else {
          f = -(phase[a] * std::conj(phase[b]) - 1.0) / gap;
        }
        z -= f * kmu(a, b) * ct(b, a);
      }
    }
    residue = std::max(residue, std::abs(z.imag()) / dt);
    out[j] = z.real();
  }
  return out;
}

GradientField adjoint_gradient(const QuantumSystem& system, const ControlField& field,
                               const DetailedPropagation& prop, const CMatrix& commutator, double objective) {
  const int steps = field.grid.n_points - 1;
  const double dt = field.grid.dt();
  double residue = 0.0;
  const RVector step_derivative =
      system.n_levels <= 8 ? step_derivatives<8>(system, field.grid, prop, commutator, residue)
                           : step_derivatives<Eigen::Dynamic>(system, field.grid, prop, commutator, residue);

  GradientField g;
  g.grid = field.grid;
  g.values.resize(field.grid.n_points);
  g.values[0] = step_derivative[0] / dt;
  g.values[steps] = step_derivative[steps - 1] / dt;
  for (int k = 1; k < steps; ++k) g.values[k] = 0.5 * (step_derivative[k - 1] + step_derivative[k]) / dt;
  g.objective = objective;
  g.imag_residue = residue;
  check_imag(residue, "gradient");
  return g;
}

}  // namespace

double evaluate_jo(const EnsembleObjective& objective, const CMatrix& u_final) {
  const Complex j = (u_final * objective.rho0 * u_final.adjoint() * objective.observable).trace();
  check_imag(std::abs(j.imag()), "J_O");
  return j.real();
}

double evaluate_jw(const UnitaryTarget& target, const CMatrix& u_final) {
  const double n = static_cast<double>(target.w.rows());
  return 2.0 * n - 2.0 * (target.w.adjoint() * u_final).trace().real();
}

double evaluate(const Objective& objective, const CMatrix& u_final) {
  if (const auto* ens = std::get_if<EnsembleObjective>(&objective)) return evaluate_jo(*ens, u_final);
  return evaluate_jw(std::get<UnitaryTarget>(objective), u_final);
}

double evaluate_field(const QuantumSystem& system, const Objective& objective, const ControlField& field) {
  return evaluate(objective, propagate(system, field, false).u_final);
}

ObjectiveRange objective_range(const Objective& objective) {
  if (const auto* ens = std::get_if<EnsembleObjective>(&objective)) {
    const RVector lam = descending_eigen(ens->rho0).values;
    const RVector eps = descending_eigen(ens->observable).values;
    const auto n = lam.size();
    double hi = 0.0, lo = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      hi += lam[i] * eps[i];
      lo += lam[i] * eps[n - 1 - i];
    }
    return {lo, hi};
  }
  const auto& target = std::get<UnitaryTarget>(objective);
  return {0.0, 4.0 * static_cast<double>(target.w.rows())};
}

GradientField gradient_jo(const QuantumSystem& system, const EnsembleObjective& objective, const ControlField& field) {
  const DetailedPropagation prop = propagate_detailed(system, field);
  const CMatrix& u = prop.u.back();
  const CMatrix o_heis = u.adjoint() * objective.observable * u;
  // U^dagger [rho(T), O] U = [rho(0), U^dagger O U]
  const CMatrix k = objective.rho0 * o_heis - o_heis * objective.rho0;
  return adjoint_gradient(system, field, prop, k, evaluate_jo(objective, u));
}

GradientField gradient_jw(const QuantumSystem& system, const UnitaryTarget& target, const ControlField& field) {
  const DetailedPropagation prop = propagate_detailed(system, field);
  const CMatrix& u = prop.u.back();
  const CMatrix wu = target.w.adjoint() * u;
  // -(W^dagger U - U^dagger W)
  const CMatrix k = -(wu - wu.adjoint());
  return adjoint_gradient(system, field, prop, k, evaluate_jw(target, u));
}

GradientField gradient(const QuantumSystem& system, const Objective& objective, const ControlField& field) {
  if (const auto* ens = std::get_if<EnsembleObjective>(&objective)) return gradient_jo(system, *ens, field);
  return gradient_jw(system, std::get<UnitaryTarget>(objective), field);
}

double default_hessian_step(const ControlField& field) {
  const double emax = field.values.size() ? field.values.cwiseAbs().maxCoeff() : 0.0;
  return 1e-4 * std::max(1.0, emax);
}

HessianMatrix hessian_fd(const GradientFunction& grad, const ControlField& field, std::optional<double> step,
                         int workers) {
  const int n = field.grid.n_points;
  const double h = step.value_or(default_hessian_step(field));
  const RVector w = field.grid.weights();
  RMatrix raw(n, n);
  parallel_for(static_cast<std::size_t>(n), workers, [&](std::size_t col) {
    const auto l = static_cast<Eigen::Index>(col);
    ControlField plus = field, minus = field;
    plus.values[l] += h;
    minus.values[l] -= h;
    raw.col(l) = (grad(plus) - grad(minus)) / (2.0 * h * w[l]);
  });
  HessianMatrix out;
  out.grid = field.grid;
  const double norm = raw.norm();
  out.relative_asymmetry = norm > 0 ? (raw - raw.transpose()).norm() / norm : 0.0;
  if (out.relative_asymmetry >= out.symmetry_tolerance) {
    throw NumericalError("finite-difference Hessian asymmetry " + std::to_string(out.relative_asymmetry) +
                         " exceeds tolerance");
  }
  out.values = 0.5 * (raw + raw.transpose());
  return out;
}

HessianMatrix hessian(const QuantumSystem& system, const Objective& objective, const ControlField& field,
                      int workers) {
  return hessian_fd([&](const ControlField& f) { return gradient(system, objective, f).values; }, field,
                    std::nullopt, workers);
}

}  // namespace qcl
