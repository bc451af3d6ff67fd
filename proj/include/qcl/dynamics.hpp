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

#pragma once

#include <vector>

#include "qcl/core.hpp"
#include "qcl/system.hpp"

namespace qcl {

// Uniform grid t_k = k * horizon / (n_points - 1).
struct TimeGrid {
  double horizon = 10.0;
  int n_points = 1001;

  // Validating constructor: horizon > 0, n_points >= 2.
  static TimeGrid make(double horizon, int n_points);

  double dt() const { return horizon / (n_points - 1); }
  double time(int k) const { return k * dt(); }
  // Trapezoidal quadrature weights (dt inside, dt/2 at both ends).
  RVector weights() const;

  bool operator==(const TimeGrid&) const = default;
};

struct ControlField {
  TimeGrid grid;
  RVector values;

  static ControlField zeros(const TimeGrid& grid) { return {grid, RVector::Zero(grid.n_points)}; }
};

struct PropagationResult {
  CMatrix u_final;
  // U(t_k, 0) for every grid point, or only {I, U(T,0)} without history.
  std::vector<CMatrix> u_history;
  bool full_history = false;
};

// Spectral data of one piecewise-constant step H = diag(h0) - dipole * e_bar.
struct StepSpectrum {
  RVector energies;
  RMatrix vectors;  // columns are eigenvectors; real because H is real symmetric
};

// Propagation that also retains each step's spectral decomposition; the
// landscape gradients differentiate through it.
struct DetailedPropagation {
  std::vector<CMatrix> u;  // U(t_k, 0), k = 0..n_points-1
  std::vector<StepSpectrum> steps;
  std::vector<CMatrix> rotated;  // V_k^T U(t_k, 0) for step k
};

// U(t_{k+1},0) = exp(-i dt (H0 - mu * (E_k + E_{k+1})/2)) U(t_k,0).
// Throws InvalidArgument on non-finite field values or mismatched dimensions.
PropagationResult propagate(const QuantumSystem& system, const ControlField& field, bool keep_history);
DetailedPropagation propagate_detailed(const QuantumSystem& system, const ControlField& field);

// exp(-i dt (H0 - mu * field_value)).
CMatrix step_propagator(const QuantumSystem& system, double field_value, double dt);
StepSpectrum step_spectrum(const QuantumSystem& system, double field_value);

// U^dagger(t_k,0) mu U(t_k,0). Requires a result computed with history.
CMatrix heisenberg_dipole(const QuantumSystem& system, const PropagationResult& result, int k);

// Trapezoidal integral of values over the grid.
double integrate(const TimeGrid& grid, const RVector& values);
// Trapezoidal inner product integral a(t) b(t) dt.
double inner(const TimeGrid& grid, const RVector& a, const RVector& b);
// Integral of E(t)^2 dt.
double fluence(const ControlField& field);

// ||U^dagger U - I||_F.
double unitarity_defect(const CMatrix& u);

}  // namespace qcl
