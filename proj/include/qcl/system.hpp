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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qcl/core.hpp"

namespace qcl {

// Closed N-level system H(t) = diag(h0) - dipole * E(t), hbar = 1.
struct QuantumSystem {
  int n_levels = 0;
  RVector h0;      // diagonal of the field-free Hamiltonian
  RMatrix dipole;  // real symmetric
};

enum class Direction { maximize, minimize };

// J_O = tr(U rho0 U^dagger O).
struct EnsembleObjective {
  CMatrix rho0;
  CMatrix observable;
  Direction direction = Direction::maximize;
};

// J_W = ||W - U||_F^2, always minimized.
struct UnitaryTarget {
  CMatrix w;
};

using Objective = std::variant<EnsembleObjective, UnitaryTarget>;

enum class PresetTag {
  ensemble8_r1o1,
  ensemble8_r1o2,
  ensemble8_r2o1,
  ensemble8_r2o2,
  ensemble8_r3o3,
  unitary4,
  statetransfer3,
  twolevel_p12,
  twolevel_unitary,
};

struct Problem {
  QuantumSystem system;
  Objective objective;
  // Number of sine components used for random initial fields on this system.
  int default_field_components = 20;
};

std::string_view to_string(PresetTag tag);
std::optional<PresetTag> parse_preset_tag(std::string_view name);
const std::vector<PresetTag>& all_presets();

// Throws InvalidArgument for unknown tags (string overload).
Problem build_preset(PresetTag tag, std::uint64_t dipole_sign_seed);
Problem build_preset(std::string_view tag, std::uint64_t dipole_sign_seed);

// Symmetric dipole with |mu_ij| = 0.5^(|i-j|-1) off the diagonal and fair-coin
// signs drawn from the seed; the diagonal is zero.
RMatrix banded_random_sign_dipole(int n, std::uint64_t seed);

struct Violation {
  std::string code;  // short machine tag, e.g. "trace", "symmetry"
  std::string message;
};

// Returns every violated invariant; empty means valid.
std::vector<Violation> validate(const QuantumSystem& system, const Objective& objective);

bool is_maximized(const Objective& objective);
int objective_dimension(const Objective& objective);

// Custom system file: {h0: [...], dipole: [[...]], rho0/observable or w}.
// Complex entries are written as [re, im] pairs; plain numbers are real.
Problem parse_problem_json(std::string_view text);
Problem load_problem_file(const std::string& path);

}  // namespace qcl
