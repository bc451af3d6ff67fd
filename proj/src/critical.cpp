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

#include "qcl/critical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qcl/csv.hpp"
#include "qcl/dynamics.hpp"
#include "qcl/landscape.hpp"
#include "qcl/linalg.hpp"
#include "qcl/parallel.hpp"

namespace qcl {

namespace {

constexpr double kSingularFloor = 1e-12;

std::vector<int> offsets(const std::vector<int>& sizes) {
  std::vector<int> off(sizes.size() + 1, 0);
  std::partial_sum(sizes.begin(), sizes.end(), off.begin() + 1);
  return off;
}

void fill_rows(std::size_t row, std::vector<int>& col_budget, const std::vector<int>& row_margins,
               std::vector<std::vector<int>>& current, std::vector<ContingencyTable>& out,
               const std::vector<int>& col_margins) {
  if (row == row_margins.size()) {
    out.push_back(ContingencyTable{current, row_margins, col_margins});
    return;
  }
  const std::size_t cols = col_budget.size();
  // Remaining capacity of columns to the right of j, used to prune rows that
  // cannot be completed.
  auto place = [&](auto&& self, std::size_t j, int remaining) -> void {
    if (j + 1 == cols) {
      if (remaining > col_budget[j]) return;
      current[row][j] = remaining;
      col_budget[j] -= remaining;
      fill_rows(row + 1, col_budget, row_margins, current, out, col_margins);
      col_budget[j] += remaining;
      current[row][j] = 0;
      return;
    }
    int right = 0;
    for (std::size_t k = j + 1; k < cols; ++k) right += col_budget[k];
    const int hi = std::min(remaining, col_budget[j]);
    for (int v = hi; v >= std::max(0, remaining - right); --v) {
      current[row][j] = v;
      col_budget[j] -= v;
      self(self, j + 1, remaining - v);
      col_budget[j] += v;
    }
    current[row][j] = 0;
  };
  place(place, 0, row_margins[row]);
}

void label_extremes(std::vector<CriticalSubmanifold>& list) {
  if (list.empty()) return;
  const double lo = list.front().j_value;
  const double hi = list.back().j_value;
  const double tol = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  for (auto& m : list) {
    if (std::abs(m.j_value - lo) <= tol) {
      m.topology = Topology::min;
    } else if (std::abs(m.j_value - hi) <= tol) {
      m.topology = Topology::max;
    } else {
      m.topology = Topology::saddle;
    }
  }
}

}  // namespace

bool ContingencyTable::margins_hold() const {
  if (entries.size() != row_margins.size()) return false;
  std::vector<int> cols(col_margins.size(), 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].size() != col_margins.size()) return false;
    int sum = 0;
    for (std::size_t j = 0; j < entries[i].size(); ++j) {
      if (entries[i][j] < 0) return false;
      sum += entries[i][j];
      cols[j] += entries[i][j];
    }
    if (sum != row_margins[i]) return false;
  }
  return cols == col_margins;
}

std::vector<ContingencyTable> enumerate_tables(const std::vector<int>& row_margins,
                                               const std::vector<int>& col_margins) {
  const int rows_total = std::accumulate(row_margins.begin(), row_margins.end(), 0);
  const int cols_total = std::accumulate(col_margins.begin(), col_margins.end(), 0);
  if (rows_total != cols_total) throw InvalidArgument("contingency margins have different totals");
  if (std::any_of(row_margins.begin(), row_margins.end(), [](int m) { return m < 0; }) ||
      std::any_of(col_margins.begin(), col_margins.end(), [](int m) { return m < 0; })) {
    throw InvalidArgument("contingency margins must be non-negative");
  }
  std::vector<ContingencyTable> out;
  if (col_margins.empty()) {
    if (rows_total == 0) out.push_back(ContingencyTable{std::vector<std::vector<int>>(row_margins.size()), row_margins, col_margins});
    return out;
  }
  std::vector<std::vector<int>> current(row_margins.size(), std::vector<int>(col_margins.size(), 0));
  std::vector<int> budget = col_margins;
  fill_rows(0, budget, row_margins, current, out, col_margins);
  return out;
}

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::min: return "min";
    case Topology::max: return "max";
    case Topology::saddle: return "saddle";
  }
  return "saddle";
}

EnsembleGeometry::EnsembleGeometry(const EnsembleObjective& objective) {
  const HermitianEigen o = descending_eigen(objective.observable);
  const HermitianEigen r = descending_eigen(objective.rho0);
  obs_vectors = o.vectors;
  rho_vectors = r.vectors;
  const Spectrum os = distinct_spectrum(o.values);
  const Spectrum rs = distinct_spectrum(r.values);
  obs_values = os.values;
  obs_multiplicities = os.multiplicities;
  rho_values = rs.values;
  rho_multiplicities = rs.multiplicities;
}

CMatrix EnsembleGeometry::to_eigenbases(const CMatrix& u) const { return obs_vectors.adjoint() * u * rho_vectors; }

std::vector<CriticalSubmanifold> enumerate_critical_jo(const EnsembleObjective& objective) {
  const EnsembleGeometry geo(objective);
  std::vector<CriticalSubmanifold> out;
  for (auto& table : enumerate_tables(geo.obs_multiplicities, geo.rho_multiplicities)) {
    double j = 0.0;
    for (std::size_t i = 0; i < geo.obs_values.size(); ++i) {
      for (std::size_t k = 0; k < geo.rho_values.size(); ++k) {
        j += table.entries[i][k] * geo.obs_values[i] * geo.rho_values[k];
      }
    }
    CriticalSubmanifold m;
    m.table = std::move(table);
    m.j_value = j;
    out.push_back(std::move(m));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const CriticalSubmanifold& a, const CriticalSubmanifold& b) { return a.j_value < b.j_value; });
  label_extremes(out);
  return out;
}

std::vector<CriticalSubmanifold> enumerate_critical_jw(int n_levels) {
  if (n_levels < 1) throw InvalidArgument("unitary landscape needs N >= 1");
  std::vector<CriticalSubmanifold> out;
  for (int alpha = 0; alpha <= n_levels; ++alpha) {
    CriticalSubmanifold m;
    m.alpha = alpha;
    m.j_value = 4.0 * alpha;
    m.topology = alpha == 0 ? Topology::min : (alpha == n_levels ? Topology::max : Topology::saddle);
    out.push_back(m);
  }
  return out;
}

std::vector<CriticalSubmanifold> enumerate_critical(const Objective& objective) {
  if (const auto* ens = std::get_if<EnsembleObjective>(&objective)) return enumerate_critical_jo(*ens);
  return enumerate_critical_jw(static_cast<int>(std::get<UnitaryTarget>(objective).w.rows()));
}

double raw_distance_jo(const EnsembleGeometry& geometry, const CMatrix& u, const ContingencyTable& table) {
  const CMatrix up = geometry.to_eigenbases(u);
  const std::vector<int> row_off = offsets(geometry.obs_multiplicities);
  const std::vector<int> col_off = offsets(geometry.rho_multiplicities);
  if (table.row_margins != geometry.obs_multiplicities || table.col_margins != geometry.rho_multiplicities) {
    throw InvalidArgument("contingency table does not belong to this objective");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < geometry.obs_multiplicities.size(); ++i) {
    for (std::size_t j = 0; j < geometry.rho_multiplicities.size(); ++j) {
      const int rows = geometry.obs_multiplicities[i];
      const int cols = geometry.rho_multiplicities[j];
      const CMatrix block = up.block(row_off[i], col_off[j], rows, cols);
      RVector sv = Eigen::JacobiSVD<CMatrix>(block).singularValues();
      for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv[k] < kSingularFloor) sv[k] = 0.0;
      }
      std::sort(sv.data(), sv.data() + sv.size(), std::greater<double>());
      for (Eigen::Index k = 0; k < sv.size(); ++k) {
        const double s = k < table.entries[i][j] ? 1.0 : 0.0;
        d += (s - sv[k]) * (s - sv[k]);
      }
    }
  }
  return d;
}

double vertex_normalizer(const ContingencyTable& target, const std::vector<CriticalSubmanifold>& all) {
  double best = 0.0;
  for (const auto& m : all) {
    if (!m.table) continue;
    double d = 0.0;
    for (std::size_t i = 0; i < target.entries.size(); ++i) {
      for (std::size_t j = 0; j < target.entries[i].size(); ++j) d += std::abs(target.entries[i][j] - m.table->entries[i][j]);
    }
    best = std::max(best, d);
  }
  return best;
}

double distance_jo(const EnsembleObjective& objective, const CMatrix& u, const CriticalSubmanifold& target) {
  if (!target.table) throw InvalidArgument("distance_jo needs an ensemble submanifold");
  const EnsembleGeometry geo(objective);
  const double norm = vertex_normalizer(*target.table, enumerate_critical_jo(objective));
  const double raw = raw_distance_jo(geo, u, *target.table);
  return norm > 0.0 ? raw / norm : 0.0;
}

double distance_jw(const CMatrix& w, const CMatrix& u, int alpha) {
  const auto n = w.rows();
  if (alpha < 0 || alpha > n) throw InvalidArgument("alpha must lie in [0, N]");
  if (u.rows() != n || u.cols() != n) throw InvalidArgument("distance_jw: dimension mismatch");
  Eigen::ComplexEigenSolver<CMatrix> es(w.adjoint() * u, false);
  std::vector<double> re(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) re[i] = es.eigenvalues()[i].real();
  std::sort(re.begin(), re.end());
  double d = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) d += i < alpha ? 1.0 + re[i] : 1.0 - re[i];
  return d / (2.0 * static_cast<double>(n));
}

CMatrix representative_unitary(const Objective& objective, const CriticalSubmanifold& target) {
  if (const auto* ens = std::get_if<EnsembleObjective>(&objective)) {
    if (!target.table) throw InvalidArgument("ensemble objective needs an ensemble submanifold");
    const EnsembleGeometry geo(*ens);
    const auto& t = *target.table;
    const std::vector<int> row_off = offsets(geo.obs_multiplicities);
    const std::vector<int> col_off = offsets(geo.rho_multiplicities);
    std::vector<int> row_used(t.row_margins.size(), 0), col_used(t.col_margins.size(), 0);
    const auto n = geo.obs_vectors.rows();
    CMatrix p = CMatrix::Zero(n, n);
    for (std::size_t i = 0; i < t.row_margins.size(); ++i) {
      for (std::size_t j = 0; j < t.col_margins.size(); ++j) {
        for (int c = 0; c < t.entries[i][j]; ++c) {
          p(row_off[i] + row_used[i]++, col_off[j] + col_used[j]++) = 1.0;
        }
      }
    }
    return geo.obs_vectors * p * geo.rho_vectors.adjoint();
  }
  const CMatrix& w = std::get<UnitaryTarget>(objective).w;
  if (target.alpha < 0 || target.alpha > w.rows()) throw InvalidArgument("unitary objective needs alpha in [0, N]");
  CVector signs = CVector::Ones(w.rows());
  for (int i = 0; i < target.alpha; ++i) signs[i] = -1.0;
  return w * signs.asDiagonal();
}

std::vector<std::string> SaddleScan::column_names() const {
  std::vector<std::string> names{"s", "J", "grad_norm"};
  for (std::size_t i = 0; i < submanifolds.size(); ++i) {
    names.push_back("D" + std::to_string(i) + "_J=" + csv::format(submanifolds[i].j_value));
  }
  return names;
}

void SaddleScan::write_csv(const std::string& path) const {
  csv::Writer w(path);
  w.header(column_names());
  for (std::size_t k = 0; k < s_values.size(); ++k) {
    std::vector<double> row{s_values[k], j_values[k], grad_norms[k]};
    row.insert(row.end(), distances[k].begin(), distances[k].end());
    w.row(row);
  }
}

SaddleScan saddle_scan(const FlowTrajectory& traj, const QuantumSystem& system, const Objective& objective,
                       int workers) {
  SaddleScan out;
  out.submanifolds = enumerate_critical(objective);
  out.s_values = traj.s_values;
  out.grad_norms = traj.grad_norms;
  out.j_values.assign(traj.size(), 0.0);
  out.distances.assign(traj.size(), std::vector<double>(out.submanifolds.size(), 0.0));

  const auto* ens = std::get_if<EnsembleObjective>(&objective);
  std::optional<EnsembleGeometry> geo;
  std::vector<double> norms;
  if (ens) {
    geo.emplace(*ens);
    for (const auto& m : out.submanifolds) norms.push_back(vertex_normalizer(*m.table, out.submanifolds));
  }
  parallel_for(traj.size(), workers, [&](std::size_t k) {
    const CMatrix u = propagate(system, traj.field(k), false).u_final;
    out.j_values[k] = evaluate(objective, u);
    for (std::size_t m = 0; m < out.submanifolds.size(); ++m) {
      if (ens) {
        const double raw = raw_distance_jo(*geo, u, *out.submanifolds[m].table);
        out.distances[k][m] = norms[m] > 0.0 ? raw / norms[m] : 0.0;
      } else {
        out.distances[k][m] = distance_jw(std::get<UnitaryTarget>(objective).w, u, out.submanifolds[m].alpha);
      }
    }
  });
  return out;
}

}  // namespace qcl
