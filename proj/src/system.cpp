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

#include "qcl/system.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "json.hpp"
#include "qcl/rng.hpp"

namespace qcl {

namespace {

struct PresetName {
  PresetTag tag;
  std::string_view name;
};

constexpr std::array<PresetName, 9> kPresetNames{{
    {PresetTag::ensemble8_r1o1, "ensemble8_r1o1"},
    {PresetTag::ensemble8_r1o2, "ensemble8_r1o2"},
    {PresetTag::ensemble8_r2o1, "ensemble8_r2o1"},
    {PresetTag::ensemble8_r2o2, "ensemble8_r2o2"},
    {PresetTag::ensemble8_r3o3, "ensemble8_r3o3"},
    {PresetTag::unitary4, "unitary4"},
    {PresetTag::statetransfer3, "statetransfer3"},
    {PresetTag::twolevel_p12, "twolevel_p12"},
    {PresetTag::twolevel_unitary, "twolevel_unitary"},
}};

CMatrix diag_matrix(std::initializer_list<double> values) {
  RVector d(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) d[i++] = v;
  return d.cast<Complex>().asDiagonal();
}

CMatrix projector(int n, int level) {
  CMatrix p = CMatrix::Zero(n, n);
  p(level, level) = 1.0;
  return p;
}

// Density matrices and observables of the eight-level ensemble landscapes.
CMatrix rho_1() { return diag_matrix({1, 0, 0, 0, 0, 0, 0, 0}); }
CMatrix rho_2() { return diag_matrix({0.25, 0.25, 0.25, 0.25, 0, 0, 0, 0}); }
CMatrix rho_3() {
  return diag_matrix({7.0 / 28, 6.0 / 28, 5.0 / 28, 4.0 / 28, 3.0 / 28, 2.0 / 28, 1.0 / 28, 0.0});
}
CMatrix obs_1() { return diag_matrix({0, 0, 0, 0, 0, 0, 4.0 / 9, 5.0 / 9}); }
CMatrix obs_2() { return diag_matrix({0, 0, 0, 0, 4.0 / 17, 4.0 / 17, 4.0 / 17, 5.0 / 17}); }
CMatrix obs_3() {
  return diag_matrix({0.0, 1.0 / 28, 2.0 / 28, 3.0 / 28, 4.0 / 28, 5.0 / 28, 6.0 / 28, 7.0 / 28});
}

QuantumSystem eight_level_system(std::uint64_t seed) {
  QuantumSystem sys;
  sys.n_levels = 8;
  sys.h0.resize(8);
  sys.h0 << -10, -8, -4, 2, 10, 20, 32, 46;
  sys.dipole = banded_random_sign_dipole(8, seed);
  return sys;
}

Problem ensemble8(CMatrix rho, CMatrix obs, std::uint64_t seed) {
  return Problem{eight_level_system(seed), EnsembleObjective{std::move(rho), std::move(obs), Direction::maximize}, 60};
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void add(std::vector<Violation>& out, std::string code, std::string message) {
  out.push_back(Violation{std::move(code), std::move(message)});
}

void check_square(std::vector<Violation>& out, const CMatrix& m, int n, const std::string& name) {
  if (m.rows() != n || m.cols() != n) {
    add(out, "dimension", name + " must be " + std::to_string(n) + "x" + std::to_string(n));
  }
}

CMatrix matrix_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(name + ": expected a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvalidArgument(name + ": ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row.at(c);
      if (e.is_number()) {
        m(r, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2) {
        m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
      } else {
        throw InvalidArgument(name + ": entries must be numbers or [re, im] pairs");
      }
    }
  }
  return m;
}

}  // namespace

std::string_view to_string(PresetTag tag) {
  for (const auto& p : kPresetNames) {
    if (p.tag == tag) return p.name;
  }
  return "unknown";
}

std::optional<PresetTag> parse_preset_tag(std::string_view name) {
  for (const auto& p : kPresetNames) {
    if (p.name == name) return p.tag;
  }
  return std::nullopt;
}

const std::vector<PresetTag>& all_presets() {
  static const std::vector<PresetTag> tags = [] {
    std::vector<PresetTag> v;
    for (const auto& p : kPresetNames) v.push_back(p.tag);
    return v;
  }();
  return tags;
}

RMatrix banded_random_sign_dipole(int n, std::uint64_t seed) {
  RMatrix mu = RMatrix::Zero(n, n);
  auto rng = CounterRng::substream(seed, 0, "dipole-signs");
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double magnitude = std::pow(0.5, j - i - 1);
      const double v = rng.coin() ? magnitude : -magnitude;
      mu(i, j) = v;
      mu(j, i) = v;
    }
  }
  return mu;
}

Problem build_preset(PresetTag tag, std::uint64_t dipole_sign_seed) {
  switch (tag) {
    case PresetTag::ensemble8_r1o1: return ensemble8(rho_1(), obs_1(), dipole_sign_seed);
    case PresetTag::ensemble8_r1o2: return ensemble8(rho_1(), obs_2(), dipole_sign_seed);
    case PresetTag::ensemble8_r2o1: return ensemble8(rho_2(), obs_1(), dipole_sign_seed);
    case PresetTag::ensemble8_r2o2: return ensemble8(rho_2(), obs_2(), dipole_sign_seed);
    case PresetTag::ensemble8_r3o3: return ensemble8(rho_3(), obs_3(), dipole_sign_seed);
    case PresetTag::unitary4: {
      QuantumSystem sys;
      sys.n_levels = 4;
      sys.h0.resize(4);
      sys.h0 << -10, -7, -1, 8;
      sys.dipole = banded_random_sign_dipole(4, dipole_sign_seed);
      CMatrix w = CMatrix::Zero(4, 4);
      w(0, 0) = 1.0;
      w(1, 2) = 1.0;
      w(2, 1) = -1.0;
      w(3, 3) = 1.0;
      return Problem{std::move(sys), UnitaryTarget{std::move(w)}, 20};
    }
    case PresetTag::statetransfer3: {
      QuantumSystem sys;
      sys.n_levels = 3;
      sys.h0.resize(3);
      sys.h0 << -10, -5, 5;
      sys.dipole.resize(3, 3);
      sys.dipole << 0, -1, -0.5,
                    -1, 0, 1,
                    -0.5, 1, 0;
      return Problem{std::move(sys), EnsembleObjective{projector(3, 0), projector(3, 2), Direction::maximize}, 20};
    }
    case PresetTag::twolevel_p12:
    case PresetTag::twolevel_unitary: {
      // Traceless H0 keeps det U(T) = 1, so SU(2) targets are reachable.
      QuantumSystem sys;
      sys.n_levels = 2;
      sys.h0.resize(2);
      sys.h0 << -2.5, 2.5;
      sys.dipole.resize(2, 2);
      sys.dipole << 0, 1,
                    1, 0;
      if (tag == PresetTag::twolevel_p12) {
        return Problem{std::move(sys), EnsembleObjective{projector(2, 0), projector(2, 1), Direction::maximize}, 20};
      }
      CMatrix w(2, 2);
      w << 0, 1,
          -1, 0;
      return Problem{std::move(sys), UnitaryTarget{std::move(w)}, 20};
    }
  }
  throw InvalidArgument("unknown preset tag");
}

Problem build_preset(std::string_view tag, std::uint64_t dipole_sign_seed) {
  auto parsed = parse_preset_tag(tag);
  if (!parsed) throw InvalidArgument("unknown preset tag '" + std::string(tag) + "'");
  return build_preset(*parsed, dipole_sign_seed);
}

std::vector<Violation> validate(const QuantumSystem& system, const Objective& objective) {
  constexpr double tol = 1e-12;
  std::vector<Violation> out;
  const int n = system.n_levels;
  if (n < 1) add(out, "dimension", "n_levels must be positive");
  if (system.h0.size() != n) add(out, "dimension", "h0 must have n_levels entries");
  if (system.dipole.rows() != n || system.dipole.cols() != n) {
    add(out, "dimension", "dipole must be n_levels x n_levels");
  } else {
    if (!system.dipole.allFinite()) add(out, "finite", "dipole has non-finite entries");
    if (system.dipole != system.dipole.transpose()) add(out, "symmetry", "dipole is not exactly symmetric");
  }
  if (system.h0.size() > 0 && !system.h0.allFinite()) add(out, "finite", "h0 has non-finite entries");

  if (const auto* ens = std::get_if<EnsembleObjective>(&objective)) {
    check_square(out, ens->rho0, n, "rho0");
    check_square(out, ens->observable, n, "observable");
    if (ens->rho0.rows() == ens->rho0.cols() && ens->rho0.size() > 0) {
      if (max_abs(ens->rho0 - ens->rho0.adjoint()) > tol) add(out, "hermitian", "rho0 is not Hermitian");
      const Complex tr = ens->rho0.trace();
      if (std::abs(tr.real() - 1.0) > tol || std::abs(tr.imag()) > tol) {
        add(out, "trace", "rho0 trace is " + std::to_string(tr.real()) + ", expected 1");
      }
      const CMatrix herm = 0.5 * (ens->rho0 + ens->rho0.adjoint());
      Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -tol) add(out, "positivity", "rho0 has a negative eigenvalue");
    }
    if (ens->observable.rows() == ens->observable.cols() && ens->observable.size() > 0 &&
        max_abs(ens->observable - ens->observable.adjoint()) > tol) {
      add(out, "hermitian", "observable is not Hermitian");
    }
  } else {
    const auto& target = std::get<UnitaryTarget>(objective);
    check_square(out, target.w, n, "w");
    if (target.w.rows() == target.w.cols() && target.w.size() > 0) {
      const auto k = target.w.rows();
      if (max_abs(target.w.adjoint() * target.w - CMatrix::Identity(k, k)) > tol) {
        add(out, "unitarity", "w is not unitary");
      }
    }
  }
  return out;
}

bool is_maximized(const Objective& objective) {
  if (const auto* ens = std::get_if<EnsembleObjective>(&objective)) return ens->direction == Direction::maximize;
  return false;
}

int objective_dimension(const Objective& objective) {
  return std::visit(
      [](const auto& o) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(o)>, EnsembleObjective>) {
          return static_cast<int>(o.rho0.rows());
        } else {
          return static_cast<int>(o.w.rows());
        }
      },
      objective);
}

Problem parse_problem_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("system file: ") + e.what());
  }
  Problem p;
  try {
    const auto& h0 = doc.at("h0");
    p.system.n_levels = static_cast<int>(h0.size());
    p.system.h0.resize(p.system.n_levels);
    for (int i = 0; i < p.system.n_levels; ++i) p.system.h0[i] = h0.at(i).get<double>();
    p.system.dipole = matrix_from_json(doc.at("dipole"), "dipole").real();
    if (doc.contains("w")) {
      p.objective = UnitaryTarget{matrix_from_json(doc.at("w"), "w")};
    } else {
      EnsembleObjective ens;
      ens.rho0 = matrix_from_json(doc.at("rho0"), "rho0");
      ens.observable = matrix_from_json(doc.at("observable"), "observable");
      const std::string dir = doc.value("direction", std::string("maximize"));
      if (dir != "maximize" && dir != "minimize") throw InvalidArgument("direction must be maximize or minimize");
      ens.direction = dir == "maximize" ? Direction::maximize : Direction::minimize;
      p.objective = std::move(ens);
    }
    p.default_field_components = doc.value("field_components", 20);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("system file: ") + e.what());
  }
  return p;
}

Problem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open system file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_problem_json(ss.str());
}

}  // namespace qcl
