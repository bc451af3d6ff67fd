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
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcl/core.hpp"
#include "qcl/dynamics.hpp"
#include "qcl/flow.hpp"
#include "qcl/system.hpp"

namespace qcl {

struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  double r_value = 0.0;
  double d_pl = 0.0;
  double d_el = 0.0;
  double j_start = 0.0;
  double j_end = 0.0;
  int n_steps = 0;
  ControlField initial_field;
  ControlField final_field;
};

// Fills the record from a finished trajectory.
RunRecord make_record(int run_id, std::uint64_t seed, const FlowTrajectory& traj);

enum class PairMode { within_a, within_b, cross };

// within_*: every unordered pair of the chosen list. cross: every (a, b) pair,
// or only index-matched pairs when matched_only is set.
std::vector<double> pairwise_distances(const std::vector<ControlField>& fields_a,
                                       const std::vector<ControlField>& fields_b, PairMode mode,
                                       bool matched_only = false);

// Stable sort by r_value with ties broken by run_id; returns the k lowest and
// the k highest records. Throws InvalidArgument if 2k exceeds the count.
std::pair<std::vector<RunRecord>, std::vector<RunRecord>> split_by_r(const std::vector<RunRecord>& records, int k);

struct Histogram {
  double lower = 0.0;
  double bin_width = 0.0;
  std::vector<long> counts;
  double mean = 0.0;
  double median = 0.0;
  double max = 0.0;

  long total() const;
  void write_csv(const std::string& path) const;
};

// Bins of fixed width starting at `lower`; values below `lower` land in the
// first bin.
Histogram make_histogram(const std::vector<double>& values, double lower, double bin_width);
// Histogram of R over [1, max R].
Histogram r_histogram(const std::vector<RunRecord>& records, double bin_width);

struct EigenRelationSample {
  double s = 0.0;
  double j = 0.0;
  double rayleigh = 0.0;  // g^ . H . g^ with trapezoidal inner products
  std::vector<double> hessian_spectrum;  // ascending, weighted operator
  double nearest_eig_gap = 0.0;
  double rho_prime = 0.0;
  double rho_ratio = 0.0;  // rho''/rho', signed so that it compares with rayleigh
};

struct EigenScanOptions {
  int stride = 1;
  int workers = 1;
  double mask_fraction = 1e-2;  // |dE(t)| below this fraction of max |dE| is ignored
};

// Hessian-gradient eigen-relation along a recorded trajectory. The trajectory
// is modelled as E(s) = E(0) + rho(s) dE with dE the end-to-end displacement;
// rho'(s) is the masked average of dE/ds divided by dE. Throws InvalidArgument
// when the mask is empty or the stride is not positive.
std::vector<EigenRelationSample> eigen_relation_scan(const QuantumSystem& system, const Objective& objective,
                                                     const FlowTrajectory& traj, const EigenScanOptions& options);

void write_eigen_relation_csv(const std::vector<EigenRelationSample>& samples, const std::string& path);
void write_eigen_spectrum_csv(const std::vector<EigenRelationSample>& samples, const std::string& path);

struct SearchOptions {
  int field_components = 20;
  int budget = 2000;  // number of candidate flows
  std::uint64_t seed = 0;
  int workers = 1;
  double initial_step = 0.3;
  // Candidates run with rel_step_tolerance multiplied by this factor.
  double tolerance_relaxation = 10.0;
  // Stop after the generation in which the search R drops to this value.
  std::optional<double> stop_below;
};

struct SearchResult {
  FieldParameters best_parameters;
  ControlField best_field;
  double best_r = 0.0;         // at full tolerance
  double best_search_r = 0.0;  // at the relaxed search tolerance
  int evaluations = 0;
  int failed_evaluations = 0;
  std::vector<double> generation_best;  // best search R after each generation
};

// Separable CMA-ES over the 2M field parameters, minimizing the R of the full
// flow started from each candidate field. Amplitudes are reflected into
// [0, 1] and phases wrapped into [0, 2 pi).
SearchResult straight_shot_search(const QuantumSystem& system, const Objective& objective, const TimeGrid& grid,
                                  const FlowConfig& flow_config, const SearchOptions& options);

// Population size 4 + floor(3 ln n) for n search coordinates.
int es_population(int dimension);
FieldParameters decode_parameters(const std::vector<double>& x);

}  // namespace qcl
