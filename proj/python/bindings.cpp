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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qcl/analysis.hpp"
#include "qcl/critical.hpp"
#include "qcl/flow.hpp"
#include "qcl/harness.hpp"
#include "qcl/landscape.hpp"
#include "qcl/system.hpp"

namespace py = pybind11;
using namespace qcl;

namespace {

ControlField make_field(const RVector& values, double horizon) {
  return ControlField{TimeGrid::make(horizon, static_cast<int>(values.size())), values};
}

FlowConfig flow_config(double rel_tol, double j_start_fraction, double j_end_fraction, double max_chord) {
  FlowConfig fc;
  fc.rel_step_tolerance = rel_tol;
  fc.j_start_fraction = j_start_fraction;
  fc.j_end_fraction = j_end_fraction;
  fc.max_chord = max_chord;
  return fc;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum control landscape explorer core";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<Problem>(m, "Problem")
      .def_property_readonly("n_levels", [](const Problem& p) { return p.system.n_levels; })
      .def_property_readonly("h0", [](const Problem& p) { return p.system.h0; })
      .def_property_readonly("dipole", [](const Problem& p) { return p.system.dipole; })
      .def_property_readonly("field_components", [](const Problem& p) { return p.default_field_components; })
      .def_property_readonly("kind", [](const Problem& p) {
        return std::holds_alternative<UnitaryTarget>(p.objective) ? "unitary" : "ensemble";
      })
      .def_property_readonly("objective_range", [](const Problem& p) {
        const ObjectiveRange r = objective_range(p.objective);
        return py::make_tuple(r.min, r.max);
      });

  m.def("presets", [] {
    std::vector<std::string> out;
    for (auto t : all_presets()) out.emplace_back(to_string(t));
    return out;
  });
  m.def("build_preset", py::overload_cast<std::string_view, std::uint64_t>(&build_preset), py::arg("tag"),
        py::arg("dipole_seed") = 0);
  m.def("load_system", &load_problem_file, py::arg("path"));

  m.def(
      "random_field",
      [](int n_points, double horizon, int components, std::uint64_t seed) {
        return generate_random_field(TimeGrid::make(horizon, n_points), components, seed).values;
      },
      py::arg("n_points") = 1001, py::arg("horizon") = 10.0, py::arg("components") = 20, py::arg("seed") = 0);

  m.def(
      "propagate",
      [](const Problem& p, const RVector& values, double horizon) {
        return propagate(p.system, make_field(values, horizon), false).u_final;
      },
      py::arg("problem"), py::arg("field"), py::arg("horizon") = 10.0);

  m.def(
      "evaluate",
      [](const Problem& p, const RVector& values, double horizon) {
        return evaluate_field(p.system, p.objective, make_field(values, horizon));
      },
      py::arg("problem"), py::arg("field"), py::arg("horizon") = 10.0);

  m.def(
      "gradient",
      [](const Problem& p, const RVector& values, double horizon) {
        return gradient(p.system, p.objective, make_field(values, horizon)).values;
      },
      py::arg("problem"), py::arg("field"), py::arg("horizon") = 10.0);

  m.def(
      "climb",
      [](const Problem& p, const RVector& values, double horizon, double rel_tol, double j_start_fraction,
         double j_end_fraction, double max_chord) {
        const FlowTrajectory t = climb(p.system, p.objective, make_field(values, horizon),
                                       flow_config(rel_tol, j_start_fraction, j_end_fraction, max_chord));
        RMatrix fields(static_cast<Eigen::Index>(t.size()), values.size());
        for (std::size_t i = 0; i < t.size(); ++i) fields.row(static_cast<Eigen::Index>(i)) = t.fields[i].transpose();
        py::dict out;
        out["s"] = t.s_values;
        out["J"] = t.j_values;
        out["grad_norm"] = t.grad_norms;
        out["fields"] = fields;
        out["path_length"] = path_length(t);
        out["distance"] = euclidean_distance(t.front(), t.back());
        out["R"] = ratio_r(t);
        return out;
      },
      py::arg("problem"), py::arg("field"), py::arg("horizon") = 10.0, py::arg("rel_tol") = 1e-9,
      py::arg("j_start_fraction") = 0.01, py::arg("j_end_fraction") = 0.01, py::arg("max_chord") = 0.02);

  m.def(
      "critical_submanifolds",
      [](const Problem& p) {
        py::list out;
        for (const auto& c : enumerate_critical(p.objective)) {
          py::dict d;
          d["j_value"] = c.j_value;
          d["topology"] = std::string(to_string(c.topology));
          if (c.table) {
            d["table"] = c.table->entries;
          } else {
            d["alpha"] = c.alpha;
          }
          out.append(d);
        }
        return out;
      },
      py::arg("problem"));

  m.def(
      "distance",
      [](const Problem& p, const CMatrix& u, int index) {
        const auto list = enumerate_critical(p.objective);
        if (index < 0 || index >= static_cast<int>(list.size())) throw InvalidArgument("submanifold index out of range");
        const auto& target = list[static_cast<std::size_t>(index)];
        if (const auto* ens = std::get_if<EnsembleObjective>(&p.objective)) return distance_jo(*ens, u, target);
        return distance_jw(std::get<UnitaryTarget>(p.objective).w, u, target.alpha);
      },
      py::arg("problem"), py::arg("u"), py::arg("index"));

  m.def(
      "straight_search",
      [](const Problem& p, int budget, std::uint64_t seed, int n_points, double horizon,
         std::optional<double> stop_below) {
        SearchOptions o;
        o.field_components = p.default_field_components;
        o.budget = budget;
        o.seed = seed;
        o.stop_below = stop_below;
        SearchResult r;
        {
          py::gil_scoped_release release;
          r = straight_shot_search(p.system, p.objective, TimeGrid::make(horizon, n_points), FlowConfig{}, o);
        }
        py::dict out;
        out["best_r"] = r.best_r;
        out["best_search_r"] = r.best_search_r;
        out["evaluations"] = r.evaluations;
        out["best_field"] = r.best_field.values;
        out["generation_best"] = r.generation_best;
        return out;
      },
      py::arg("problem"), py::arg("budget"), py::arg("seed") = 0, py::arg("n_points") = 1001,
      py::arg("horizon") = 10.0, py::arg("stop_below") = std::nullopt);

  m.def(
      "run_batch",
      [](const std::string& config_json) {
        const ExperimentConfig cfg = ExperimentConfig::from_json(config_json);
        BatchResult r;
        {
          py::gil_scoped_release release;
          r = run_batch(cfg);
        }
        std::vector<double> rs;
        for (const auto& rec : r.records) rs.push_back(rec.r_value);
        py::dict out;
        out["r_values"] = rs;
        out["mean_r"] = r.r_hist.mean;
        out["manifest"] = r.manifest.path;
        return out;
      },
      py::arg("config_json"));
}
