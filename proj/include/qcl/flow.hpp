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
#include <vector>

#include "qcl/core.hpp"
#include "qcl/dynamics.hpp"
#include "qcl/landscape.hpp"
#include "qcl/system.hpp"

namespace qcl {

class CounterRng;

enum class FlowDirection { ascend, descend };

struct FlowConfig {
  // Unset: ascend for maximized objectives, descend for minimized ones.
  std::optional<FlowDirection> direction;
  double j_start_fraction = 0.01;
  double j_end_fraction = 0.01;
  // Relative local error per integrator step, measured on the whole field.
  double rel_step_tolerance = 1e-9;
  // Unset: 1e-6 of the objective range.
  std::optional<double> level_tolerance;
  int max_s_steps = 20000;
  bool record_every_step = true;
  // Upper bound on the RMS field change of one accepted step. Keeps the chord
  // sum of the recorded samples a faithful path length.
  double max_chord = 0.02;
  // Upper bound on the angle (radians) the flow direction turns within one
  // accepted step. Near saddles the path bends sharply and fixed-length chords
  // would cut the corners.
  double max_turn = 0.05;

  // Throws InvalidArgument on out-of-range settings.
  void validate() const;
};

struct FlowLevels {
  double j_start = 0.0;
  double j_end = 0.0;
  double tolerance = 0.0;
  FlowDirection direction = FlowDirection::ascend;
};

FlowLevels flow_levels(const Objective& objective, const FlowConfig& config);

struct FlowTrajectory {
  TimeGrid grid;
  std::vector<double> s_values;
  std::vector<RVector> fields;
  std::vector<double> j_values;
  std::vector<double> grad_norms;  // sqrt((1/T) integral g^2 dt)
  int rejected_steps = 0;
  long gradient_evaluations = 0;

  std::size_t size() const { return s_values.size(); }
  ControlField field(std::size_t i) const { return {grid, fields.at(i)}; }
  ControlField front() const { return field(0); }
  ControlField back() const { return field(size() - 1); }
};

class FlowError : public Error {
 public:
  enum class Kind { max_steps_exceeded, stalled, wrong_side };
  FlowError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Coefficients of a random field: amplitudes a_n in [0,1], phases phi_n in
// [0, 2 pi), frequencies omega_n = n.
struct FieldParameters {
  std::vector<double> amplitudes;
  std::vector<double> phases;
};

FieldParameters draw_field_parameters(int m, CounterRng& rng);

// E(t) = (1/F) exp(-0.3 (t - T/2)^2) sum_n a_n sin(n t + phi_n), F set for unit
// fluence. Throws InvalidArgument when the unnormalized field vanishes.
ControlField field_from_parameters(const TimeGrid& grid, const FieldParameters& params);

// Draws parameters from the seed's substreams, moving to the next substream
// if a draw is degenerate.
ControlField generate_random_field(const TimeGrid& grid, int m, std::uint64_t seed);

// Flows along +/- gradient until J equals target_j within the level
// tolerance; the crossing step is bisected onto the level.
ControlField adjust_to_level(const QuantumSystem& system, const Objective& objective, const ControlField& field,
                             double target_j, const FlowConfig& config);

// Gradient flow dE/ds = +/- dJ/dE from J^I to J^F with an embedded
// Dormand-Prince 5(4) pair. The initial field must sit on J^I.
FlowTrajectory dmorph_flow(const QuantumSystem& system, const Objective& objective,
                           const ControlField& initial_field, const FlowConfig& config);

// adjust_to_level onto J^I followed by dmorph_flow.
FlowTrajectory climb(const QuantumSystem& system, const Objective& objective, const ControlField& raw_field,
                     const FlowConfig& config);

// [(1/T) integral (b - a)^2 dt]^(1/2), trapezoidal.
double euclidean_distance(const ControlField& a, const ControlField& b);
// Chord sum over consecutive recorded samples.
double path_length(const FlowTrajectory& traj);
double ratio_r(const FlowTrajectory& traj);

struct MarchOptions {
  double step = 0.01;  // RMS field distance between probes along the ray
  int max_probes = 100000;
  double refine_tolerance = 1e-7;
};

struct MarchResult {
  ControlField field;
  double best_j = 0.0;
  double distance = 0.0;  // RMS distance from the initial field
};

// Marches along the initial normalized gradient until J stops improving, then
// refines the bracketing interval by golden-section search.
MarchResult straight_march(const QuantumSystem& system, const Objective& objective, const ControlField& initial_field,
                           const FlowConfig& config, const MarchOptions& options = {});

// Summary CSV (step, s, J, grad_norm) and field CSV (one row per step).
void write_trajectory_csv(const FlowTrajectory& traj, const std::string& summary_path,
                          const std::string& fields_path);

}  // namespace qcl
