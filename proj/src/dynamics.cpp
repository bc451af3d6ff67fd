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

#include "qcl/dynamics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace qcl {

namespace {

void check_inputs(const QuantumSystem& system, const ControlField& field) {
  if (field.grid.n_points < 2) throw InvalidArgument("time grid needs at least 2 points");
  if (field.values.size() != field.grid.n_points) {
    throw InvalidArgument("field has " + std::to_string(field.values.size()) + " samples, grid has " +
                          std::to_string(field.grid.n_points));
  }
  if (!field.values.allFinite()) throw InvalidArgument("field contains non-finite values");
  if (system.h0.size() != system.n_levels || system.dipole.rows() != system.n_levels) {
    throw InvalidArgument("system dimensions are inconsistent");
  }
}

// Stack-allocated storage for the small systems this library targets; larger
// systems fall back to heap matrices.
template <int MaxN>
struct Kernel {
  using RM = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, MaxN, MaxN>;
  using CM = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, MaxN, MaxN>;

  struct Step {
    Eigen::SelfAdjointEigenSolver<RM> solver;
    RM h;
    CM rotated;

    explicit Step(int n) : solver(n), h(n, n), rotated(n, n) {}

    // u <- V exp(-i dt diag(energies)) V^T u, leaving V^T u in `rotated`.
    void advance(const QuantumSystem& system, double e_bar, double dt, CM& u) {
      h = -e_bar * system.dipole;
      h.diagonal() += system.h0;
      solver.compute(h);
      const auto& v = solver.eigenvectors();
      rotated.noalias() = v.transpose() * u;
      CM scaled = rotated;
      for (Eigen::Index a = 0; a < scaled.rows(); ++a) {
        const double phase = -dt * solver.eigenvalues()[a];
        scaled.row(a) *= Complex(std::cos(phase), std::sin(phase));
      }
      u.noalias() = v * scaled;
    }
  };

  static PropagationResult propagate(const QuantumSystem& system, const ControlField& field, bool keep_history) {
    const int n = system.n_levels;
    const int steps = field.grid.n_points - 1;
    const double dt = field.grid.dt();
    PropagationResult out;
    out.full_history = keep_history;
    CM u = CM::Identity(n, n);
    Step step(n);
    if (keep_history) out.u_history.reserve(field.grid.n_points);
    out.u_history.push_back(CMatrix(u));
    for (int k = 0; k < steps; ++k) {
      step.advance(system, 0.5 * (field.values[k] + field.values[k + 1]), dt, u);
      if (keep_history) out.u_history.push_back(CMatrix(u));
    }
    if (!keep_history) out.u_history.push_back(CMatrix(u));
    out.u_final = u;
    return out;
  }

  static DetailedPropagation detailed(const QuantumSystem& system, const ControlField& field) {
    const int n = system.n_levels;
    const int steps = field.grid.n_points - 1;
    const double dt = field.grid.dt();
    DetailedPropagation out;
    out.u.reserve(field.grid.n_points);
    out.steps.reserve(steps);
    out.rotated.reserve(steps);
    CM u = CM::Identity(n, n);
    Step step(n);
    out.u.push_back(CMatrix(u));
    for (int k = 0; k < steps; ++k) {
      step.advance(system, 0.5 * (field.values[k] + field.values[k + 1]), dt, u);
      out.steps.push_back(StepSpectrum{step.solver.eigenvalues(), step.solver.eigenvectors()});
      out.rotated.push_back(CMatrix(step.rotated));
      out.u.push_back(CMatrix(u));
    }
    return out;
  }
};

}  // namespace

TimeGrid TimeGrid::make(double horizon, int n_points) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidArgument("time horizon must be positive");
  if (n_points < 2) throw InvalidArgument("time grid needs at least 2 points");
  return TimeGrid{horizon, n_points};
}

RVector TimeGrid::weights() const {
  RVector w = RVector::Constant(n_points, dt());
  w[0] *= 0.5;
  w[n_points - 1] *= 0.5;
  return w;
}

StepSpectrum step_spectrum(const QuantumSystem& system, double field_value) {
  RMatrix h = -field_value * system.dipole;
  h.diagonal() += system.h0;
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h);
  return StepSpectrum{es.eigenvalues(), es.eigenvectors()};
}

CMatrix step_propagator(const QuantumSystem& system, double field_value, double dt) {
  const StepSpectrum spec = step_spectrum(system, field_value);
  CVector phases(system.n_levels);
  for (int a = 0; a < system.n_levels; ++a) {
    phases[a] = Complex(std::cos(dt * spec.energies[a]), -std::sin(dt * spec.energies[a]));
  }
  return spec.vectors * phases.asDiagonal() * spec.vectors.transpose();
}

PropagationResult propagate(const QuantumSystem& system, const ControlField& field, bool keep_history) {
  check_inputs(system, field);
  if (system.n_levels <= 8) return Kernel<8>::propagate(system, field, keep_history);
  return Kernel<Eigen::Dynamic>::propagate(system, field, keep_history);
}

DetailedPropagation propagate_detailed(const QuantumSystem& system, const ControlField& field) {
  check_inputs(system, field);
  if (system.n_levels <= 8) return Kernel<8>::detailed(system, field);
  return Kernel<Eigen::Dynamic>::detailed(system, field);
}

CMatrix heisenberg_dipole(const QuantumSystem& system, const PropagationResult& result, int k) {
  if (!result.full_history) throw InvalidArgument("heisenberg_dipole needs a propagation with history");
  if (k < 0 || k >= static_cast<int>(result.u_history.size())) throw InvalidArgument("time index out of range");
  const CMatrix& u = result.u_history[k];
  return u.adjoint() * system.dipole.cast<Complex>() * u;
}

double integrate(const TimeGrid& grid, const RVector& values) {
  if (values.size() != grid.n_points) throw InvalidArgument("integrand does not match the grid");
  const Eigen::Index last = grid.n_points - 1;
  return grid.dt() * (values.sum() - 0.5 * (values[0] + values[last]));
}

double inner(const TimeGrid& grid, const RVector& a, const RVector& b) {
  if (a.size() != b.size()) throw InvalidArgument("inner product of mismatched vectors");
  return integrate(grid, a.cwiseProduct(b));
}

double fluence(const ControlField& field) { return inner(field.grid, field.values, field.values); }

double unitarity_defect(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm();
}

}  // namespace qcl
