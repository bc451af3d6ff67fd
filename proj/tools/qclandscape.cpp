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

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qcl/harness.hpp"

namespace {

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> workers;
  std::string preset;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "seed (master seed for batch)");
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--workers", c.workers, "worker threads (overrides config and QCL_WORKERS)")->check(CLI::PositiveNumber);
  cmd->add_option("--preset", c.preset, "preset tag (overrides config)");
}

qcl::ExperimentConfig resolve(const Common& c) {
  qcl::ExperimentConfig cfg = c.config_path.empty() ? qcl::ExperimentConfig{} : qcl::ExperimentConfig::load(c.config_path);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (!c.preset.empty()) {
    cfg.preset = c.preset;
    cfg.system_file.reset();
  }
  if (c.workers) {
    cfg.workers = *c.workers;
    setenv(qcl::kWorkersEnv, std::to_string(*c.workers).c_str(), 1);
  }
  cfg.validate();
  return cfg;
}

void print_manifest(const qcl::Manifest& m) {
  std::cout << "wrote " << m.files.size() << " files, manifest " << m.path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum control landscape explorer"};
  app.require_subcommand(1);

  Common batch_opts;
  int runs = 0;
  auto* batch = app.add_subcommand("batch", "seeded batch of landscape climbs with R statistics");
  add_common(batch, batch_opts);
  batch->add_option("--runs", runs, "number of runs (overrides config)")->check(CLI::PositiveNumber);

  Common single_opts;
  bool saddle = false;
  auto* single = app.add_subcommand("single", "one climb with per-step output");
  add_common(single, single_opts);
  single->add_flag("--saddle-scan", saddle, "emit distances to every critical submanifold");

  Common eigen_opts;
  std::string field_file;
  auto* eigen = app.add_subcommand("eigen", "Hessian-gradient eigen-relation scan along a climb");
  add_common(eigen, eigen_opts);
  eigen->add_option("--field", field_file, "initial field CSV (t,E) instead of a seeded random field")
      ->check(CLI::ExistingFile);

  Common search_opts;
  int budget = 0;
  auto* search = app.add_subcommand("search", "evolution-strategy search for a straight climb");
  add_common(search, search_opts);
  search->add_option("--budget", budget, "number of candidate flows (overrides config)")->check(CLI::PositiveNumber);

  auto* presets = app.add_subcommand("presets", "list the built-in systems");

  std::string validate_path;
  bool print_defaults = false;
  auto* validate = app.add_subcommand("validate-config", "check a config file or print the defaults");
  validate->add_option("--config", validate_path, "JSON experiment config")->check(CLI::ExistingFile);
  validate->add_flag("--print-defaults", print_defaults, "print the default config as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*batch) {
      qcl::ExperimentConfig cfg = resolve(batch_opts);
      if (batch_opts.seed) cfg.master_seed = *batch_opts.seed;
      if (runs > 0) cfg.n_runs = runs;
      cfg.validate();
      const auto res = qcl::run_batch(cfg);
      std::cout << "runs " << res.records.size() << "  mean R " << res.r_hist.mean << "  median R " << res.r_hist.median
                << "  max R " << res.r_hist.max << "\n";
      print_manifest(res.manifest);
    } else if (*single) {
      qcl::ExperimentConfig cfg = resolve(single_opts);
      if (saddle) cfg.saddle_scan = true;
      const auto res = qcl::run_single(cfg, single_opts.seed.value_or(cfg.master_seed));
      std::cout << "seed " << res.record.seed << "  R " << res.record.r_value << "  J " << res.record.j_start << " -> "
                << res.record.j_end << "  samples " << res.trajectory.size() << "\n";
      print_manifest(res.manifest);
    } else if (*eigen) {
      const qcl::ExperimentConfig cfg = resolve(eigen_opts);
      const auto res = qcl::run_eigen_relation(cfg, eigen_opts.seed.value_or(cfg.master_seed),
                                               field_file.empty() ? std::nullopt : std::optional(field_file));
      std::cout << "R " << qcl::ratio_r(res.trajectory) << "  scanned samples " << res.samples.size() << "\n";
      print_manifest(res.manifest);
    } else if (*search) {
      qcl::ExperimentConfig cfg = resolve(search_opts);
      if (budget > 0) cfg.search_budget = budget;
      cfg.validate();
      const auto res = qcl::run_straight_search(cfg, search_opts.seed.value_or(cfg.master_seed));
      std::cout << "best R " << res.search.best_r << "  (search tolerance " << res.search.best_search_r << ")  flows "
                << res.search.evaluations << "\n";
      print_manifest(res.manifest);
    } else if (*presets) {
      for (auto tag : qcl::all_presets()) {
        const qcl::Problem p = qcl::build_preset(tag, 0);
        const bool unitary = std::holds_alternative<qcl::UnitaryTarget>(p.objective);
        std::cout << qcl::to_string(tag) << "  N=" << p.system.n_levels << "  objective="
                  << (unitary ? "J_W (minimize)" : "J_O (maximize)") << "  field components "
                  << p.default_field_components << "\n";
      }
    } else if (*validate) {
      if (print_defaults) {
        std::cout << qcl::ExperimentConfig{}.to_json();
        return 0;
      }
      if (validate_path.empty()) {
        std::cerr << "validate-config needs --config or --print-defaults\n";
        return 2;
      }
      const auto cfg = qcl::ExperimentConfig::load(validate_path);
      const auto problem = cfg.problem();
      const auto violations = qcl::validate(problem.system, problem.objective);
      for (const auto& v : violations) std::cerr << v.code << ": " << v.message << "\n";
      if (!violations.empty()) return 1;
      std::cout << "ok\n";
    }
  } catch (const qcl::BatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
