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

#include "qcl/analysis.hpp"
#include "qcl/critical.hpp"
#include "qcl/flow.hpp"
#include "qcl/system.hpp"

namespace qcl {

// Environment variable that overrides the configured worker count.
inline constexpr const char* kWorkersEnv = "QCL_WORKERS";

struct ExperimentConfig {
  std::string preset = "ensemble8_r1o1";
  std::optional<std::string> system_file;  // custom system JSON; replaces the preset
  std::uint64_t dipole_seed = 0;

  double horizon = 10.0;
  int n_points = 1001;
  std::optional<int> field_components;  // unset: the preset's default

  FlowConfig flow;

  int n_runs = 1000;
  std::uint64_t master_seed = 0;
  int workers = 1;

  bool saddle_scan = false;
  int eigen_stride = 1;
  std::optional<int> split_k;  // unset: n_runs / 4
  double r_bin_width = 0.01;
  double distance_bin_width = 0.01;
  double mask_fraction = 1e-2;
  // Optional maximum chord for the eigen-relation trajectory (denser samples).
  std::optional<double> eigen_max_chord;

  int search_budget = 2000;
  std::optional<double> search_stop_below;
  double search_initial_step = 0.3;
  double search_tolerance_relaxation = 10.0;

  std::string output_dir = "out";

  // Throws InvalidArgument on malformed JSON, unknown keys or bad values.
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  std::string to_json() const;
  void validate() const;

  Problem problem() const;
  TimeGrid grid() const;
  int components(const Problem& problem) const;
  int split_size() const { return split_k.value_or(n_runs / 4); }
};

// Worker count after applying the environment override (if set and valid).
int resolve_workers(int configured);

// Seed of run i in a batch.
std::uint64_t run_seed(std::uint64_t master_seed, int run_id);

// Raised when a batch run fails; carries the run's seed.
class BatchError : public Error {
 public:
  BatchError(int run_id, std::uint64_t seed, const std::string& what)
      : Error("run " + std::to_string(run_id) + " (seed " + std::to_string(seed) + ") failed: " + what),
        run_id_(run_id),
        seed_(seed) {}
  int run_id() const { return run_id_; }
  std::uint64_t seed() const { return seed_; }

 private:
  int run_id_;
  std::uint64_t seed_;
};

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct Manifest {
  std::string command;
  std::vector<ManifestEntry> files;
  std::string path;  // manifest.json location
};

std::string sha256_file(const std::string& path);

struct BatchResult {
  std::vector<RunRecord> records;
  Histogram r_hist;
  Manifest manifest;
};

BatchResult run_batch(const ExperimentConfig& config);

struct SingleResult {
  RunRecord record;
  FlowTrajectory trajectory;
  std::optional<SaddleScan> scan;
  Manifest manifest;
};

SingleResult run_single(const ExperimentConfig& config, std::uint64_t seed);

struct EigenResult {
  FlowTrajectory trajectory;
  std::vector<EigenRelationSample> samples;
  Manifest manifest;
};

// Starts from the seed's random field, or from a field CSV (columns t,E) when
// field_file is given.
EigenResult run_eigen_relation(const ExperimentConfig& config, std::uint64_t seed,
                               const std::optional<std::string>& field_file = std::nullopt);

struct SearchRunResult {
  SearchResult search;
  Manifest manifest;
};

SearchRunResult run_straight_search(const ExperimentConfig& config, std::uint64_t seed);

void write_field_csv(const ControlField& field, const std::string& path);
// Reads a t,E CSV; the grid is rebuilt from the first and last time stamps.
ControlField read_field_csv(const std::string& path);

}  // namespace qcl
