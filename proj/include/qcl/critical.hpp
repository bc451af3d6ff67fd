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

#include <optional>
#include <string>
#include <vector>

#include "qcl/core.hpp"
#include "qcl/flow.hpp"
#include "qcl/system.hpp"

namespace qcl {

// Rows follow the distinct eigenvalues of O, columns those of rho(0), both in
// descending order.
struct ContingencyTable {
  std::vector<std::vector<int>> entries;
  std::vector<int> row_margins;
  std::vector<int> col_margins;

  int at(std::size_t i, std::size_t j) const { return entries.at(i).at(j); }
  bool margins_hold() const;
};

// Every non-negative integer table with the given margins, in depth-first
// order (rows first, each row's columns from the left). Throws
// InvalidArgument when the margin totals differ.
std::vector<ContingencyTable> enumerate_tables(const std::vector<int>& row_margins, const std::vector<int>& col_margins);

enum class Topology { min, max, saddle };
std::string_view to_string(Topology t);

struct CriticalSubmanifold {
  std::optional<ContingencyTable> table;  // ensemble landscape
  int alpha = -1;                         // unitary landscape: number of -1 eigenvalues of W^dagger U
  double j_value = 0.0;
  Topology topology = Topology::saddle;

  bool is_ensemble() const { return table.has_value(); }
};

// Eigenbases and degeneracy structure of an ensemble objective.
struct EnsembleGeometry {
  CMatrix obs_vectors;  // columns: eigenvectors of O, eigenvalues descending
  CMatrix rho_vectors;  // columns: eigenvectors of rho(0), eigenvalues descending
  std::vector<double> obs_values;  // distinct, descending
  std::vector<double> rho_values;
  std::vector<int> obs_multiplicities;
  std::vector<int> rho_multiplicities;

  explicit EnsembleGeometry(const EnsembleObjective& objective);
  // V_O^dagger U V_rho
  CMatrix to_eigenbases(const CMatrix& u) const;
};

// Sorted by j_value ascending; ties keep enumeration order.
std::vector<CriticalSubmanifold> enumerate_critical_jo(const EnsembleObjective& objective);
// alpha = 0..N with j_value = 4 alpha.
std::vector<CriticalSubmanifold> enumerate_critical_jw(int n_levels);
std::vector<CriticalSubmanifold> enumerate_critical(const Objective& objective);

// Sum over blocks of the squared differences between the block's sorted
// singular values and the table's c_ij leading ones.
double raw_distance_jo(const EnsembleGeometry& geometry, const CMatrix& u, const ContingencyTable& table);
// Largest raw distance from the target's vertex to any other vertex.
double vertex_normalizer(const ContingencyTable& target, const std::vector<CriticalSubmanifold>& all);

double distance_jo(const EnsembleObjective& objective, const CMatrix& u, const CriticalSubmanifold& target);
double distance_jw(const CMatrix& w, const CMatrix& u, int alpha);

// A propagator lying on the submanifold: V_O P V_rho^dagger with P a
// permutation realizing the table, or W diag(-1 x alpha, +1 x (N - alpha)).
CMatrix representative_unitary(const Objective& objective, const CriticalSubmanifold& target);

struct SaddleScan {
  std::vector<CriticalSubmanifold> submanifolds;
  std::vector<double> s_values;
  std::vector<double> j_values;
  std::vector<double> grad_norms;
  std::vector<std::vector<double>> distances;  // [sample][submanifold]

  std::vector<std::string> column_names() const;
  void write_csv(const std::string& path) const;
};

SaddleScan saddle_scan(const FlowTrajectory& traj, const QuantumSystem& system, const Objective& objective,
                       int workers = 1);

}  // namespace qcl
