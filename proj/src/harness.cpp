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

#include "qcl/harness.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "qcl/csv.hpp"
#include "qcl/parallel.hpp"
#include "qcl/rng.hpp"

namespace qcl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw InvalidArgument("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void take(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
void take(const json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key)) return;
  if (obj.at(key).is_null()) {
    out.reset();
    return;
  }
  T v{};
  take(obj, key, v);
  out = v;
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json section(const json& root, const char* key, const std::set<std::string>& allowed) {
  if (!root.contains(key)) return json::object();
  const json& s = root.at(key);
  reject_unknown(s, allowed, std::string("section '") + key + "'");
  return s;
}

class OutputDir {
 public:
  OutputDir(const std::string& dir, std::string command) : dir_(dir) {
    fs::create_directories(dir_);
    manifest_.command = std::move(command);
  }

  std::string path(const std::string& name) {
    names_.push_back(name);
    return (dir_ / name).string();
  }

  void write_text(const std::string& name, const std::string& text) {
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    out << text;
  }

  Manifest finish() {
    json files = json::array();
    for (const auto& name : names_) {
      const fs::path p = dir_ / name;
      ManifestEntry e{name, sha256_file(p.string()), fs::file_size(p)};
      files.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
      manifest_.files.push_back(std::move(e));
    }
    const json doc{{"command", manifest_.command}, {"files", files}};
    manifest_.path = (dir_ / "manifest.json").string();
    std::ofstream out(manifest_.path, std::ios::binary);
    if (!out) throw Error("cannot write " + manifest_.path);
    out << doc.dump(2) << '\n';
    return manifest_;
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
  Manifest manifest_;
};

FlowConfig recording(FlowConfig fc) {
  fc.record_every_step = true;
  return fc;
}

void write_record_json(OutputDir& out, const std::string& name, const RunRecord& r) {
  const json doc{{"run_id", r.run_id},   {"seed", r.seed},   {"r_value", r.r_value}, {"d_pl", r.d_pl},
                 {"d_el", r.d_el},       {"j_start", r.j_start}, {"j_end", r.j_end}, {"n_steps", r.n_steps}};
  out.write_text(name, doc.dump(2) + "\n");
}

void write_trajectory(OutputDir& out, const FlowTrajectory& traj) {
  write_trajectory_csv(traj, out.path("trajectory.csv"), out.path("trajectory_fields.csv"));
}

json histogram_json(const Histogram& h) {
  return {{"count", h.total()}, {"mean", h.mean}, {"median", h.median}, {"max", h.max}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root, {"preset", "system_file", "dipole_seed", "grid", "field", "flow", "batch", "analysis", "search",
                        "output_dir"},
                 "config");
  ExperimentConfig c;
  take(root, "preset", c.preset);
  take(root, "system_file", c.system_file);
  take(root, "dipole_seed", c.dipole_seed);
  take(root, "output_dir", c.output_dir);

  const json grid = section(root, "grid", {"horizon", "n_points"});
  take(grid, "horizon", c.horizon);
  take(grid, "n_points", c.n_points);

  const json field = section(root, "field", {"components"});
  take(field, "components", c.field_components);

  const json flow = section(root, "flow", {"direction", "j_start_fraction", "j_end_fraction", "rel_step_tolerance",
                                           "level_tolerance", "max_s_steps", "max_chord", "max_turn"});
  std::optional<std::string> direction;
  take(flow, "direction", direction);
  if (direction) {
    if (*direction == "ascend") {
      c.flow.direction = FlowDirection::ascend;
    } else if (*direction == "descend") {
      c.flow.direction = FlowDirection::descend;
    } else {
      throw InvalidArgument("flow.direction must be \"ascend\", \"descend\" or null");
    }
  }
  take(flow, "j_start_fraction", c.flow.j_start_fraction);
  take(flow, "j_end_fraction", c.flow.j_end_fraction);
  take(flow, "rel_step_tolerance", c.flow.rel_step_tolerance);
  take(flow, "level_tolerance", c.flow.level_tolerance);
  take(flow, "max_s_steps", c.flow.max_s_steps);
  take(flow, "max_chord", c.flow.max_chord);
  take(flow, "max_turn", c.flow.max_turn);

  const json batch = section(root, "batch", {"n_runs", "master_seed", "workers"});
  take(batch, "n_runs", c.n_runs);
  take(batch, "master_seed", c.master_seed);
  take(batch, "workers", c.workers);

  const json analysis = section(root, "analysis", {"saddle_scan", "eigen_stride", "split_k", "r_bin_width",
                                                   "distance_bin_width", "mask_fraction", "eigen_max_chord"});
  take(analysis, "saddle_scan", c.saddle_scan);
  take(analysis, "eigen_stride", c.eigen_stride);
  take(analysis, "split_k", c.split_k);
  take(analysis, "r_bin_width", c.r_bin_width);
  take(analysis, "distance_bin_width", c.distance_bin_width);
  take(analysis, "mask_fraction", c.mask_fraction);
  take(analysis, "eigen_max_chord", c.eigen_max_chord);

  const json search = section(root, "search", {"budget", "stop_below", "initial_step", "tolerance_relaxation"});
  take(search, "budget", c.search_budget);
  take(search, "stop_below", c.search_stop_below);
  take(search, "initial_step", c.search_initial_step);
  take(search, "tolerance_relaxation", c.search_tolerance_relaxation);

  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string ExperimentConfig::to_json() const {
  json direction = nullptr;
  if (flow.direction) direction = *flow.direction == FlowDirection::ascend ? "ascend" : "descend";
  const json doc{
      {"preset", preset},
      {"system_file", opt(system_file)},
      {"dipole_seed", dipole_seed},
      {"grid", {{"horizon", horizon}, {"n_points", n_points}}},
      {"field", {{"components", opt(field_components)}}},
      {"flow",
       {{"direction", direction},
        {"j_start_fraction", flow.j_start_fraction},
        {"j_end_fraction", flow.j_end_fraction},
        {"rel_step_tolerance", flow.rel_step_tolerance},
        {"level_tolerance", opt(flow.level_tolerance)},
        {"max_s_steps", flow.max_s_steps},
        {"max_chord", flow.max_chord},
        {"max_turn", flow.max_turn}}},
      {"batch", {{"n_runs", n_runs}, {"master_seed", master_seed}, {"workers", workers}}},
      {"analysis",
       {{"saddle_scan", saddle_scan},
        {"eigen_stride", eigen_stride},
        {"split_k", opt(split_k)},
        {"r_bin_width", r_bin_width},
        {"distance_bin_width", distance_bin_width},
        {"mask_fraction", mask_fraction},
        {"eigen_max_chord", opt(eigen_max_chord)}}},
      {"search",
       {{"budget", search_budget},
        {"stop_below", opt(search_stop_below)},
        {"initial_step", search_initial_step},
        {"tolerance_relaxation", search_tolerance_relaxation}}},
      {"output_dir", output_dir},
  };
  return doc.dump(2) + "\n";
}

void ExperimentConfig::validate() const {
  if (!system_file && !parse_preset_tag(preset)) throw InvalidArgument("unknown preset '" + preset + "'");
  if (!(horizon > 0.0)) throw InvalidArgument("grid.horizon must be positive");
  if (n_points < 3) throw InvalidArgument("grid.n_points must be at least 3");
  if (field_components && *field_components < 1) throw InvalidArgument("field.components must be at least 1");
  flow.validate();
  if (n_runs < 1) throw InvalidArgument("batch.n_runs must be at least 1");
  if (workers < 1) throw InvalidArgument("batch.workers must be at least 1");
  if (eigen_stride < 1) throw InvalidArgument("analysis.eigen_stride must be at least 1");
  if (split_k && (*split_k < 0 || 2 * *split_k > n_runs)) throw InvalidArgument("analysis.split_k must be in [0, n_runs/2]");
  if (!(r_bin_width > 0.0) || !(distance_bin_width > 0.0)) throw InvalidArgument("histogram bin widths must be positive");
  if (!(mask_fraction >= 0.0 && mask_fraction < 1.0)) throw InvalidArgument("analysis.mask_fraction must be in [0, 1)");
  if (eigen_max_chord && !(*eigen_max_chord > 0.0)) throw InvalidArgument("analysis.eigen_max_chord must be positive");
  if (search_budget < 1) throw InvalidArgument("search.budget must be at least 1");
  if (!(search_initial_step > 0.0)) throw InvalidArgument("search.initial_step must be positive");
  if (!(search_tolerance_relaxation >= 1.0)) throw InvalidArgument("search.tolerance_relaxation must be >= 1");
  if (output_dir.empty()) throw InvalidArgument("output_dir must not be empty");
}

Problem ExperimentConfig::problem() const {
  if (system_file) {
    Problem p = load_problem_file(*system_file);
    const auto violations = qcl::validate(p.system, p.objective);
    if (!violations.empty()) throw InvalidArgument("custom system invalid: " + violations.front().message);
    return p;
  }
  return build_preset(preset, dipole_seed);
}

TimeGrid ExperimentConfig::grid() const { return TimeGrid::make(horizon, n_points); }

int ExperimentConfig::components(const Problem& problem) const {
  return field_components.value_or(problem.default_field_components);
}

int resolve_workers(int configured) {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid " << kWorkersEnv << "=" << env << "\n";
  }
  return std::max(1, configured);
}

std::uint64_t run_seed(std::uint64_t master_seed, int run_id) {
  return CounterRng::derive(master_seed, static_cast<std::uint64_t>(run_id), "batch-run");
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw Error("sha256: out of memory");
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 15];
  while (in) {
    in.read(buf, sizeof(buf));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

BatchResult run_batch(const ExperimentConfig& config) {
  config.validate();
  const Problem problem = config.problem();
  const TimeGrid grid = config.grid();
  const int m = config.components(problem);
  const int workers = resolve_workers(config.workers);
  const FlowConfig fc = recording(config.flow);

  BatchResult result;
  result.records.resize(static_cast<std::size_t>(config.n_runs));
  parallel_for(result.records.size(), workers, [&](std::size_t i) {
    const int id = static_cast<int>(i);
    const std::uint64_t seed = run_seed(config.master_seed, id);
    try {
      const ControlField field = generate_random_field(grid, m, seed);
      result.records[i] = make_record(id, seed, climb(problem.system, problem.objective, field, fc));
    } catch (const Error& e) {
      throw BatchError(id, seed, e.what());
    }
  });

  OutputDir out(config.output_dir, "batch");
  out.write_text("config.json", config.to_json());
  {
    csv::Writer w(out.path("runs.csv"));
    w.header({"run_id", "seed", "r_value", "d_pl", "d_el", "j_start", "j_end", "n_steps"});
    for (const auto& r : result.records) {
      w.text_row({std::to_string(r.run_id), std::to_string(r.seed), csv::format(r.r_value), csv::format(r.d_pl),
                  csv::format(r.d_el), csv::format(r.j_start), csv::format(r.j_end), std::to_string(r.n_steps)});
    }
  }
  for (const char* which : {"initial", "final"}) {
    csv::Writer w(out.path(std::string(which) + "_fields.csv"));
    std::vector<std::string> names{"run_id"};
    for (int k = 0; k < grid.n_points; ++k) names.push_back("E" + std::to_string(k));
    w.header(names);
    for (const auto& r : result.records) {
      const RVector& v = which[0] == 'i' ? r.initial_field.values : r.final_field.values;
      w.row({static_cast<long long>(r.run_id)}, std::vector<double>(v.data(), v.data() + v.size()));
    }
  }

  result.r_hist = r_histogram(result.records, config.r_bin_width);
  result.r_hist.write_csv(out.path("r_histogram.csv"));

  const auto [low, high] = split_by_r(result.records, config.split_size());
  {
    csv::Writer w(out.path("splits.csv"));
    w.header({"group", "run_id", "seed", "r_value"});
    for (const auto* group : {&low, &high}) {
      const std::string name = group == &low ? "low" : "high";
      for (const auto& r : *group) {
        w.text_row({name, std::to_string(r.run_id), std::to_string(r.seed), csv::format(r.r_value)});
      }
    }
  }

  json distances = json::object();
  for (const auto* group : {&low, &high}) {
    const std::string name = group == &low ? "low" : "high";
    std::vector<ControlField> initial, final;
    for (const auto& r : *group) {
      initial.push_back(r.initial_field);
      final.push_back(r.final_field);
    }
    json g = json::object();
    if (group->size() >= 2) {
      const std::vector<std::pair<std::string, std::vector<double>>> sets{
          {"initial_initial", pairwise_distances(initial, final, PairMode::within_a)},
          {"final_final", pairwise_distances(initial, final, PairMode::within_b)},
          {"initial_final", pairwise_distances(initial, final, PairMode::cross)},
      };
      for (const auto& [kind, values] : sets) {
        const Histogram h = make_histogram(values, 0.0, config.distance_bin_width);
        h.write_csv(out.path("distances_" + name + "_" + kind + ".csv"));
        g[kind] = histogram_json(h);
      }
    }
    distances[name] = g;
  }

  double r_min = result.records.front().r_value;
  for (const auto& r : result.records) r_min = std::min(r_min, r.r_value);
  const json summary{
      {"n_runs", config.n_runs},
      {"r", {{"mean", result.r_hist.mean}, {"median", result.r_hist.median}, {"max", result.r_hist.max}, {"min", r_min}}},
      {"split_k", config.split_size()},
      {"low_r_max", low.empty() ? json(nullptr) : json(low.back().r_value)},
      {"high_r_min", high.empty() ? json(nullptr) : json(high.front().r_value)},
      {"distances", distances},
  };
  out.write_text("summary.json", summary.dump(2) + "\n");
  result.manifest = out.finish();
  return result;
}

SingleResult run_single(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const Problem problem = config.problem();
  const TimeGrid grid = config.grid();
  const ControlField field = generate_random_field(grid, config.components(problem), seed);
  SingleResult result;
  try {
    result.trajectory = climb(problem.system, problem.objective, field, recording(config.flow));
  } catch (const Error& e) {
    throw BatchError(0, seed, e.what());
  }
  result.record = make_record(0, seed, result.trajectory);

  OutputDir out(config.output_dir, "single");
  out.write_text("config.json", config.to_json());
  write_record_json(out, "record.json", result.record);
  write_trajectory(out, result.trajectory);
  write_field_csv(result.trajectory.front(), out.path("initial_field.csv"));
  write_field_csv(result.trajectory.back(), out.path("final_field.csv"));
  if (config.saddle_scan) {
    result.scan = saddle_scan(result.trajectory, problem.system, problem.objective, resolve_workers(config.workers));
    result.scan->write_csv(out.path("saddle_scan.csv"));
  }
  result.manifest = out.finish();
  return result;
}

EigenResult run_eigen_relation(const ExperimentConfig& config, std::uint64_t seed,
                               const std::optional<std::string>& field_file) {
  config.validate();
  const Problem problem = config.problem();
  if (problem.system.n_levels > 4) {
    std::cerr << "warning: eigen-relation scan on N=" << problem.system.n_levels
              << " builds one n_points x n_points Hessian per sample; this is slow\n";
  }
  const ControlField field = field_file ? read_field_csv(*field_file)
                                        : generate_random_field(config.grid(), config.components(problem), seed);
  FlowConfig fc = recording(config.flow);
  if (config.eigen_max_chord) fc.max_chord = *config.eigen_max_chord;

  EigenResult result;
  result.trajectory = climb(problem.system, problem.objective, field, fc);
  EigenScanOptions opts;
  opts.stride = config.eigen_stride;
  opts.workers = resolve_workers(config.workers);
  opts.mask_fraction = config.mask_fraction;
  result.samples = eigen_relation_scan(problem.system, problem.objective, result.trajectory, opts);

  OutputDir out(config.output_dir, "eigen");
  out.write_text("config.json", config.to_json());
  write_trajectory(out, result.trajectory);
  write_eigen_relation_csv(result.samples, out.path("eigen_relation.csv"));
  write_eigen_spectrum_csv(result.samples, out.path("eigen_spectrum.csv"));
  const json summary{{"seed", field_file ? json(nullptr) : json(seed)},
                     {"field_file", field_file ? json(*field_file) : json(nullptr)},
                     {"r_value", ratio_r(result.trajectory)},
                     {"samples", result.samples.size()}};
  out.write_text("eigen_summary.json", summary.dump(2) + "\n");
  result.manifest = out.finish();
  return result;
}

SearchRunResult run_straight_search(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const Problem problem = config.problem();
  SearchOptions opts;
  opts.field_components = config.components(problem);
  opts.budget = config.search_budget;
  opts.seed = seed;
  opts.workers = resolve_workers(config.workers);
  opts.initial_step = config.search_initial_step;
  opts.tolerance_relaxation = config.search_tolerance_relaxation;
  opts.stop_below = config.search_stop_below;

  SearchRunResult result;
  result.search = straight_shot_search(problem.system, problem.objective, config.grid(), recording(config.flow), opts);
  const SearchResult& s = result.search;

  OutputDir out(config.output_dir, "search");
  out.write_text("config.json", config.to_json());
  write_field_csv(s.best_field, out.path("best_field.csv"));
  {
    csv::Writer w(out.path("best_parameters.csv"));
    w.header({"n", "amplitude", "phase"});
    for (std::size_t n = 0; n < s.best_parameters.amplitudes.size(); ++n) {
      w.row({static_cast<long long>(n + 1)}, {s.best_parameters.amplitudes[n], s.best_parameters.phases[n]});
    }
  }
  const json report{{"seed", seed},
                    {"best_r", s.best_r},
                    {"best_search_r", s.best_search_r},
                    {"evaluations", s.evaluations},
                    {"failed_evaluations", s.failed_evaluations},
                    {"generation_best", s.generation_best}};
  out.write_text("search_report.json", report.dump(2) + "\n");
  result.manifest = out.finish();
  return result;
}

void write_field_csv(const ControlField& field, const std::string& path) {
  csv::Writer w(path);
  w.header({"t", "E"});
  for (int k = 0; k < field.grid.n_points; ++k) w.row(std::vector<double>{field.grid.time(k), field.values[k]});
}

ControlField read_field_csv(const std::string& path) {
  const auto rows = csv::read_numeric(path, true);
  if (rows.size() < 2) throw InvalidArgument(path + ": a field needs at least two samples");
  ControlField f;
  f.grid = TimeGrid::make(rows.back().at(0) - rows.front().at(0), static_cast<int>(rows.size()));
  f.values.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != 2) throw InvalidArgument(path + ": expected two columns t,E");
    f.values[static_cast<Eigen::Index>(k)] = rows[k][1];
  }
  return f;
}

}  // namespace qcl
