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

#include <algorithm>
#include <cmath>

#include "../support/oracles.hpp"
#include "doctest.h"
#include "qcl/flow.hpp"
#include "qcl/landscape.hpp"
#include "qcl/linalg.hpp"
#include "qcl/rng.hpp"

using namespace qcl;

namespace {

CMatrix permutation(int n, const std::vector<int>& image) {
  CMatrix p = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) p(image[j], j) = 1.0;
  return p;
}

}  // namespace

TEST_SUITE("landscape") {

TEST_CASE("ensemble objective values") {
  const Problem p = build_preset(PresetTag::ensemble8_r1o1, 0);
  const auto& ens = std::get<EnsembleObjective>(p.objective);
  CHECK(evaluate_jo(ens, CMatrix::Identity(8, 8)) == 0.0);
  // Level 1 to level 8.
  const CMatrix swap18 = permutation(8, {7, 1, 2, 3, 4, 5, 6, 0});
  CHECK(evaluate_jo(ens, swap18) == 5.0 / 9.0);

  const Problem p2 = build_preset(PresetTag::ensemble8_r2o1, 0);
  const auto& ens2 = std::get<EnsembleObjective>(p2.objective);
  auto rng = CounterRng::substream(1, 0, "test-unitaries");
  for (int i = 0; i < 50; ++i) {
    const double j = evaluate_jo(ens2, random_unitary(8, rng));
    CHECK(j >= -1e-15);
    CHECK(j <= 0.25 + 1e-15);
  }
  const ObjectiveRange r = objective_range(p2.objective);
  CHECK(r.min == 0.0);
  CHECK(r.max == 0.25);
}

TEST_CASE("unitary objective values") {
  const Problem p = build_preset(PresetTag::unitary4, 0);
  const auto& t = std::get<UnitaryTarget>(p.objective);
  CHECK(evaluate_jw(t, t.w) == 0.0);
  CHECK(evaluate_jw(t, -t.w) == doctest::Approx(16.0).epsilon(1e-15));
  CMatrix flip = CMatrix::Identity(4, 4);
  flip(0, 0) = -1.0;
  CHECK(evaluate_jw(t, flip * t.w) == doctest::Approx(4.0).epsilon(1e-15));
  const ObjectiveRange r = objective_range(p.objective);
  CHECK(r.min == 0.0);
  CHECK(r.max == 16.0);
}

TEST_CASE("gradient matches finite differences") {
  for (auto tag : all_presets()) {
    CAPTURE(to_string(tag));
    const Problem p = build_preset(tag, 1);
    for (std::uint64_t seed : {3ULL, 8ULL}) {
      const ControlField f = generate_random_field(TimeGrid::make(10.0, 1001), p.default_field_components, seed);
      const GradientField g = gradient(p.system, p.objective, f);
      const RVector fd = oracle::local_fd_gradient(p.system, p.objective, f, 1e-6);
      CHECK(oracle::relative_l2(g.values, fd) < 1e-5);
      CHECK(g.objective == doctest::Approx(evaluate_field(p.system, p.objective, f)).epsilon(1e-12));
      CHECK(g.imag_residue < 1e-10);
    }
  }
}

TEST_CASE("local finite differences agree with full re-propagation") {
  const Problem p = build_preset(PresetTag::ensemble8_r1o1, 0);
  const ControlField f = generate_random_field(TimeGrid::make(10.0, 1001), 60, 2);
  const RVector local = oracle::local_fd_gradient(p.system, p.objective, f, 1e-6);
  for (int k : {0, 1, 333, 999, 1000}) {
    CAPTURE(k);
    CHECK(oracle::brute_fd_component(p.system, p.objective, f, k, 1e-6) ==
          doctest::Approx(local[k]).epsilon(1e-5).scale(1e-2));
  }
}

TEST_CASE("gradient approaches the continuum kernel under refinement") {
  const Problem p = build_preset(PresetTag::ensemble8_r2o2, 0);
  double previous = 0.0;
  for (int n : {1001, 4001}) {
    const ControlField f = generate_random_field(TimeGrid::make(10.0, n), 60, 4);
    const double err = oracle::relative_l2(gradient(p.system, p.objective, f).values,
                                           oracle::continuum_gradient(p.system, p.objective, f));
    if (previous > 0.0) CHECK(err < previous / 8.0);
    previous = err;
  }
  CHECK(previous < 2e-3);
}

TEST_CASE("gradient vanishes when rho(T) commutes with O") {
  // Diagonal rho0, O and H0 with a zero field.
  for (auto tag : {PresetTag::ensemble8_r1o1, PresetTag::ensemble8_r3o3, PresetTag::statetransfer3}) {
    const Problem p = build_preset(tag, 0);
    const GradientField g = gradient(p.system, p.objective, ControlField::zeros(TimeGrid::make(10.0, 1001)));
    CHECK(g.values.cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gradient vanishes at a global optimum") {
  // Target W set to the propagator of the field itself.
  Problem p = build_preset(PresetTag::unitary4, 2);
  const ControlField f = generate_random_field(TimeGrid::make(10.0, 1001), 20, 6);
  UnitaryTarget t{propagate(p.system, f, false).u_final};
  const GradientField g = gradient_jw(p.system, t, f);
  CHECK(g.objective < 1e-24);
  CHECK(g.values.cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("quadratic hook Hessian is -1/w on the diagonal") {
  const TimeGrid grid = TimeGrid::make(2.0, 41);
  const RVector w = grid.weights();
  RVector target(41);
  for (int k = 0; k < 41; ++k) target[k] = std::sin(grid.time(k));
  // J = -1/2 integral (E - E*)^2 has kernel -(E - E*).
  const GradientFunction grad = [&](const ControlField& f) { return RVector(-(f.values - target)); };
  const HessianMatrix h = hessian_fd(grad, ControlField::zeros(grid));
  RMatrix expected = RMatrix::Zero(41, 41);
  for (int k = 0; k < 41; ++k) expected(k, k) = -1.0 / w[k];
  CHECK((h.values - expected).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(h.relative_asymmetry < 1e-12);
}

TEST_CASE("asymmetric derivative is reported") {
  const TimeGrid grid = TimeGrid::make(1.0, 6);
  const GradientFunction grad = [](const ControlField& f) {
    RVector g = RVector::Zero(f.values.size());
    g[0] = 5.0 * f.values[3];
    return g;
  };
  CHECK_THROWS_AS(hessian_fd(grad, ControlField::zeros(grid)), NumericalError);
}

TEST_CASE("three-level Hessian is symmetric") {
  const Problem p = build_preset(PresetTag::statetransfer3, 0);
  const ControlField f = generate_random_field(TimeGrid::make(10.0, 201), 20, 1);
  const HessianMatrix h = hessian(p.system, p.objective, f);
  CHECK(h.relative_asymmetry < h.symmetry_tolerance);
  CHECK((h.values - h.values.transpose()).norm() == 0.0);
  CHECK(h.values.rows() == 201);
  CHECK(default_hessian_step(f) == doctest::Approx(1e-4 * std::max(1.0, f.values.cwiseAbs().maxCoeff())));
}

TEST_CASE("Hessian is independent of the worker count") {
  const Problem p = build_preset(PresetTag::twolevel_p12, 0);
  const ControlField f = generate_random_field(TimeGrid::make(10.0, 61), 20, 1);
  CHECK((hessian(p.system, p.objective, f, 1).values - hessian(p.system, p.objective, f, 3).values).norm() == 0.0);
}

}  // TEST_SUITE
