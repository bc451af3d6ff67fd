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

#include <functional>
#include <optional>

#include "qcl/core.hpp"
#include "qcl/dynamics.hpp"
#include "qcl/system.hpp"

namespace qcl {

// Raised when a trace formula that must be real leaves an imaginary residue.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Functional derivative dJ/dE(t_k), reported as a kernel value: the discrete
// partial derivative dJ/dE_k equals weights()[k] * values[k].
struct GradientField {
  TimeGrid grid;
  RVector values;
  double objective = 0.0;      // J at the field the gradient was taken at
  double imag_residue = 0.0;   // largest discarded imaginary part
};

// Second functional derivative H(t_k, t_l), symmetrized.
struct HessianMatrix {
  TimeGrid grid;
  RMatrix values;
  double relative_asymmetry = 0.0;  // ||H - H^T||_F / ||H||_F before symmetrization
  double symmetry_tolerance = 1e-3;
};

struct ObjectiveRange {
  double min = 0.0;
  double max = 0.0;
  double span() const { return max - min; }
};

double evaluate_jo(const EnsembleObjective& objective, const CMatrix& u_final);
double evaluate_jw(const UnitaryTarget& target, const CMatrix& u_final);
double evaluate(const Objective& objective, const CMatrix& u_final);
double evaluate_field(const QuantumSystem& system, const Objective& objective, const ControlField& field);

// Global extremes: von Neumann bounds for J_O, [0, 4N] for J_W.
ObjectiveRange objective_range(const Objective& objective);

GradientField gradient_jo(const QuantumSystem& system, const EnsembleObjective& objective, const ControlField& field);
GradientField gradient_jw(const QuantumSystem& system, const UnitaryTarget& target, const ControlField& field);
GradientField gradient(const QuantumSystem& system, const Objective& objective, const ControlField& field);

// Gradient kernel of an arbitrary functional; used by the finite-difference Hessian.
using GradientFunction = std::function<RVector(const ControlField&)>;

// Default finite-difference step: 1e-4 * max(1, ||E||_inf).
double default_hessian_step(const ControlField& field);

// Column l is (g(E + h d_l) - g(E - h d_l)) / (2 h w_l) with d_l the unit bump
// at t_l and w_l its quadrature weight. Throws NumericalError when the raw
// matrix is asymmetric beyond 1e-3 relative.
HessianMatrix hessian_fd(const GradientFunction& grad, const ControlField& field,
                         std::optional<double> step = std::nullopt, int workers = 1);
HessianMatrix hessian(const QuantumSystem& system, const Objective& objective, const ControlField& field,
                      int workers = 1);

}  // namespace qcl
