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

#include "qcl/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "qcl/csv.hpp"
#include "qcl/rng.hpp"

namespace qcl {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<std::array<double, 6>, 7> kA{{
    {{0, 0, 0, 0, 0, 0}},
    {{1.0 / 5, 0, 0, 0, 0, 0}},
    {{3.0 / 40, 9.0 / 40, 0, 0, 0, 0}},
    {{44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0}},
    {{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0}},
    {{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0}},
    {{35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}},
}};
// Fifth-order weights minus embedded fourth-order weights.
constexpr std::array<double, 7> kErr{71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200, 22.0 / 525,
                                     -1.0 / 40};

double rms(const TimeGrid& grid, const RVector& v) { return std::sqrt(std::max(0.0, inner(grid, v, v)) / grid.horizon); }

// Angle between two flow velocities (grid values as plain vectors).
double turning_angle(const RVector& a, const RVector& b) {
  const double na = a.norm(), nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) return 0.0;
  return std::acos(std::clamp(a.dot(b) / (na * nb), -1.0, 1.0));
}

struct FlowState {
  RVector y;
  RVector f;  // signed gradient at y
  double j = 0.0;
  double s = 0.0;
};

struct StepResult {
  FlowState next;
  double error = 0.0;
};

class Integrator {
 public:
  Integrator(const QuantumSystem& system, const Objective& objective, const TimeGrid& grid, double sign,
             const FlowConfig& config, FlowTrajectory* record)
      : system_(system), objective_(objective), grid_(grid), sign_(sign), config_(config), record_(record) {}

  FlowState evaluate(RVector y, double s) {
    GradientField g = gradient(system_, objective_, ControlField{grid_, y});
    ++evaluations_;
    return FlowState{std::move(y), sign_ * g.values, g.objective, s};
  }

  StepResult step(const FlowState& from, double h) {
    std::array<RVector, 7> k;
    k[0] = from.f;
    for (int stage = 1; stage < 6; ++stage) {
      RVector y = from.y;
      for (int p = 0; p < stage; ++p) {
        if (kA[stage][p] != 0.0) y += (h * kA[stage][p]) * k[p];
      }
      k[stage] = evaluate(std::move(y), from.s).f;
    }
    RVector y5 = from.y;
    for (int p = 0; p < 6; ++p) {
      if (kA[6][p] != 0.0) y5 += (h * kA[6][p]) * k[p];
    }
    StepResult out;
    out.next = evaluate(std::move(y5), from.s + h);
    k[6] = out.next.f;
    RVector err = RVector::Zero(from.y.size());
    for (int p = 0; p < 7; ++p) {
      if (kErr[p] != 0.0) err += (h * kErr[p]) * k[p];
    }
    const double scale = config_.rel_step_tolerance * std::max({rms(grid_, from.y), rms(grid_, out.next.y), 1e-3});
    out.error = rms(grid_, err) / scale;
    return out;
  }

  void record(const FlowState& st) {
    if (!record_) return;
    record_->s_values.push_back(st.s);
    record_->fields.push_back(st.y);
    record_->j_values.push_back(st.j);
    record_->grad_norms.push_back(rms(grid_, st.f));
  }

  // Integrates from `start` until J reaches `target` (within `tol`).
  FlowState run(FlowState state, double target, double tol) {
    record(state);
    if (std::abs(state.j - target) <= tol) return state;
    if (sign_ * (target - state.j) < 0) {
      throw FlowError(FlowError::Kind::wrong_side, "flow direction points away from the target level");
    }
    const double g0 = rms(grid_, state.f);
    if (!(g0 > 0.0)) throw FlowError(FlowError::Kind::stalled, "zero gradient at the start of the flow");
    double h = 0.25 * config_.max_chord / g0;
    int accepted = 0;
    for (int attempt = 0;; ++attempt) {
      if (accepted >= config_.max_s_steps || attempt >= 4 * config_.max_s_steps) {
        throw FlowError(FlowError::Kind::max_steps_exceeded,
                        "flow exceeded " + std::to_string(config_.max_s_steps) + " steps before reaching J=" +
                            std::to_string(target));
      }
      StepResult trial = step(state, h);
      if (!(trial.error <= 1.0) || !std::isfinite(trial.next.j)) {
        ++rejected_;
        const double factor = std::isfinite(trial.error) ? std::max(0.2, 0.9 * std::pow(trial.error, -0.2)) : 0.2;
        h *= factor;
        continue;
      }
      const double turn = turning_angle(state.f, trial.next.f);
      if (turn > config_.max_turn) {
        ++rejected_;
        h *= std::max(0.2, 0.9 * config_.max_turn / turn);
        continue;
      }
      const double over = sign_ * (trial.next.j - target);
      if (std::abs(trial.next.j - target) <= tol) {
        record(trial.next);
        return trial.next;
      }
      if (over > 0) {
        FlowState landed = land(state, h, trial.next, target, tol);
        record(landed);
        return landed;
      }
      state = std::move(trial.next);
      ++accepted;
      record(state);
      const double gnorm = rms(grid_, state.f);
      if (gnorm < 1e-12 * g0) {
        throw FlowError(FlowError::Kind::stalled, "gradient collapsed before reaching J=" + std::to_string(target));
      }
      const double factor = trial.error > 0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(trial.error, -0.2))) : 5.0;
      h = std::min(h * factor, config_.max_chord / gnorm);
    }
  }

  int rejected() const { return rejected_; }
  long evaluations() const { return evaluations_; }

 private:
  // Bracketing search on the step size (Illinois variant of regula falsi,
  // falling back to bisection) for the sub-step that lands on the level.
  FlowState land(const FlowState& from, double h_hi, FlowState at_hi, double target, double tol) {
    double lo = 0.0, hi = h_hi;
    double f_lo = sign_ * (from.j - target);
    double f_hi = sign_ * (at_hi.j - target);
    FlowState best = at_hi;
    int side = 0;
    for (int it = 0; it < 100; ++it) {
      double h = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
      if (!(h > lo && h < hi) || it % 4 == 3) h = 0.5 * (lo + hi);
      FlowState trial = step(from, h).next;
      const double fv = sign_ * (trial.j - target);
      if (std::abs(trial.j - target) <= tol) return trial;
      if (fv > 0) {
        hi = h;
        f_hi = fv;
        best = trial;
        if (side == 1) f_lo *= 0.5;
        side = 1;
      } else {
        lo = h;
        f_lo = fv;
        if (side == -1) f_hi *= 0.5;
        side = -1;
      }
    }
    throw FlowError(FlowError::Kind::max_steps_exceeded, "could not land on the target level");
  }

  const QuantumSystem& system_;
  const Objective& objective_;
  TimeGrid grid_;
  double sign_;
  const FlowConfig& config_;
  FlowTrajectory* record_;
  int rejected_ = 0;
  long evaluations_ = 0;
};

double level_tolerance(const Objective& objective, const FlowConfig& config) {
  return config.level_tolerance.value_or(1e-6 * objective_range(objective).span());
}

}  // namespace

void FlowConfig::validate() const {
  if (!(j_start_fraction > 0 && j_start_fraction < 0.5)) throw InvalidArgument("j_start_fraction must be in (0, 0.5)");
  if (!(j_end_fraction > 0 && j_end_fraction < 0.5)) throw InvalidArgument("j_end_fraction must be in (0, 0.5)");
  if (!(rel_step_tolerance > 0)) throw InvalidArgument("rel_step_tolerance must be positive");
  if (level_tolerance && !(*level_tolerance > 0)) throw InvalidArgument("level_tolerance must be positive");
  if (max_s_steps < 1) throw InvalidArgument("max_s_steps must be at least 1");
  if (!(max_chord > 0)) throw InvalidArgument("max_chord must be positive");
  if (!(max_turn > 0 && max_turn <= std::numbers::pi)) throw InvalidArgument("max_turn must be in (0, pi]");
}

FlowLevels flow_levels(const Objective& objective, const FlowConfig& config) {
  const ObjectiveRange range = objective_range(objective);
  FlowLevels lv;
  lv.direction = config.direction.value_or(is_maximized(objective) ? FlowDirection::ascend : FlowDirection::descend);
  lv.tolerance = level_tolerance(objective, config);
  if (lv.direction == FlowDirection::ascend) {
    lv.j_start = range.min + config.j_start_fraction * range.span();
    lv.j_end = range.max - config.j_end_fraction * range.span();
  } else {
    lv.j_start = range.max - config.j_start_fraction * range.span();
    lv.j_end = range.min + config.j_end_fraction * range.span();
  }
  return lv;
}

FieldParameters draw_field_parameters(int m, CounterRng& rng) {
  if (m < 1) throw InvalidArgument("field needs at least one component");
  FieldParameters p;
  p.amplitudes.resize(static_cast<std::size_t>(m));
  p.phases.resize(static_cast<std::size_t>(m));
  for (int n = 0; n < m; ++n) {
    p.amplitudes[n] = rng.uniform();
    p.phases[n] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return p;
}

ControlField field_from_parameters(const TimeGrid& grid, const FieldParameters& params) {
  if (params.amplitudes.empty() || params.amplitudes.size() != params.phases.size()) {
    throw InvalidArgument("field parameters need matching nonempty amplitude and phase lists");
  }
  ControlField field = ControlField::zeros(grid);
  const double mid = 0.5 * grid.horizon;
  for (int k = 0; k < grid.n_points; ++k) {
    const double t = grid.time(k);
    double sum = 0.0;
    for (std::size_t n = 0; n < params.amplitudes.size(); ++n) {
      sum += params.amplitudes[n] * std::sin(static_cast<double>(n + 1) * t + params.phases[n]);
    }
    field.values[k] = std::exp(-0.3 * (t - mid) * (t - mid)) * sum;
  }
  const double f = fluence(field);
  if (!(f > 1e-300) || !std::isfinite(f)) throw InvalidArgument("degenerate field parameters");
  field.values /= std::sqrt(f);
  return field;
}

ControlField generate_random_field(const TimeGrid& grid, int m, std::uint64_t seed) {
  for (std::uint64_t sub = 0;; ++sub) {
    auto rng = CounterRng::substream(seed, sub, "random-field");
    const FieldParameters params = draw_field_parameters(m, rng);
    try {
      return field_from_parameters(grid, params);
    } catch (const InvalidArgument&) {
      if (sub > 64) throw;
    }
  }
}

ControlField adjust_to_level(const QuantumSystem& system, const Objective& objective, const ControlField& field,
                             double target_j, const FlowConfig& config) {
  config.validate();
  const ObjectiveRange range = objective_range(objective);
  if (!(target_j > range.min && target_j < range.max)) {
    throw InvalidArgument("target level must lie strictly between the landscape extremes");
  }
  const double tol = level_tolerance(objective, config);
  const double j0 = evaluate_field(system, objective, field);
  if (std::abs(j0 - target_j) <= tol) return field;
  const double sign = j0 < target_j ? 1.0 : -1.0;
  Integrator integ(system, objective, field.grid, sign, config, nullptr);
  FlowState start = integ.evaluate(field.values, 0.0);
  return ControlField{field.grid, integ.run(std::move(start), target_j, tol).y};
}

FlowTrajectory dmorph_flow(const QuantumSystem& system, const Objective& objective, const ControlField& initial_field,
                           const FlowConfig& config) {
  config.validate();
  const FlowLevels lv = flow_levels(objective, config);
  const double sign = lv.direction == FlowDirection::ascend ? 1.0 : -1.0;
  FlowTrajectory traj;
  traj.grid = initial_field.grid;
  FlowTrajectory sparse;
  Integrator integ(system, objective, initial_field.grid, sign, config, config.record_every_step ? &traj : &sparse);
  FlowState start = integ.evaluate(initial_field.values, 0.0);
  if (std::abs(start.j - lv.j_start) > lv.tolerance) {
    throw InvalidArgument("initial field is not on the starting level (J=" + std::to_string(start.j) +
                          ", expected " + std::to_string(lv.j_start) + ")");
  }
  integ.run(std::move(start), lv.j_end, lv.tolerance);
  if (!config.record_every_step) {
    // Keep only the endpoints.
    traj = sparse;
    const std::size_t last = sparse.size() - 1;
    traj.s_values = {sparse.s_values.front(), sparse.s_values[last]};
    traj.fields = {sparse.fields.front(), sparse.fields[last]};
    traj.j_values = {sparse.j_values.front(), sparse.j_values[last]};
    traj.grad_norms = {sparse.grad_norms.front(), sparse.grad_norms[last]};
  }
  traj.rejected_steps = integ.rejected();
  traj.gradient_evaluations = integ.evaluations();
  return traj;
}

FlowTrajectory climb(const QuantumSystem& system, const Objective& objective, const ControlField& raw_field,
                     const FlowConfig& config) {
  const FlowLevels lv = flow_levels(objective, config);
  const ControlField start = adjust_to_level(system, objective, raw_field, lv.j_start, config);
  return dmorph_flow(system, objective, start, config);
}

double euclidean_distance(const ControlField& a, const ControlField& b) {
  if (!(a.grid == b.grid)) throw InvalidArgument("fields live on different time grids");
  const RVector d = b.values - a.values;
  return rms(a.grid, d);
}

double path_length(const FlowTrajectory& traj) {
  if (traj.size() < 2) throw InvalidArgument("path length needs at least two samples");
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    total += rms(traj.grid, traj.fields[i + 1] - traj.fields[i]);
  }
  return total;
}

double ratio_r(const FlowTrajectory& traj) {
  const double d_el = euclidean_distance(traj.front(), traj.back());
  if (!(d_el > 0)) throw InvalidArgument("trajectory endpoints coincide; R is undefined");
  return path_length(traj) / d_el;
}

MarchResult straight_march(const QuantumSystem& system, const Objective& objective, const ControlField& initial_field,
                           const FlowConfig& config, const MarchOptions& options) {
  const FlowLevels lv = flow_levels(objective, config);
  const double sign = lv.direction == FlowDirection::ascend ? 1.0 : -1.0;
  const GradientField g = gradient(system, objective, initial_field);
  MarchResult best{initial_field, g.objective, 0.0};
  const double gnorm = rms(initial_field.grid, g.values);
  if (!(gnorm > 0)) return best;
  const RVector dir = (sign / gnorm) * g.values;
  auto score = [&](double lambda) {
    return sign * evaluate_field(system, objective, ControlField{initial_field.grid, initial_field.values + lambda * dir});
  };

  double prev_l = 0.0, prev_s = sign * g.objective;
  double lo = 0.0, hi = options.step;
  bool bracketed = false;
  for (int k = 1; k <= options.max_probes; ++k) {
    const double l = k * options.step;
    const double s = score(l);
    if (s <= prev_s) {
      lo = std::max(0.0, prev_l - options.step);
      hi = l;
      bracketed = true;
      break;
    }
    prev_l = l;
    prev_s = s;
  }
  if (!bracketed) {
    best.field = ControlField{initial_field.grid, initial_field.values + prev_l * dir};
    best.best_j = sign * prev_s;
    best.distance = prev_l;
    return best;
  }
  // Golden-section refinement on [lo, hi].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = score(c), fd = score(d);
  while (b - a > options.refine_tolerance) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = score(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = score(d);
    }
  }
  double l_best = fc > fd ? c : d;
  double s_best = std::max(fc, fd);
  if (prev_s >= s_best) {
    l_best = prev_l;
    s_best = prev_s;
  }
  if (s_best <= sign * g.objective) return best;
  best.field = ControlField{initial_field.grid, initial_field.values + l_best * dir};
  best.best_j = sign * s_best;
  best.distance = l_best;
  return best;
}

void write_trajectory_csv(const FlowTrajectory& traj, const std::string& summary_path, const std::string& fields_path) {
  csv::Writer summary(summary_path);
  summary.header({"step", "s", "J", "grad_norm"});
  for (std::size_t i = 0; i < traj.size(); ++i) {
    summary.row({static_cast<long long>(i)}, {traj.s_values[i], traj.j_values[i], traj.grad_norms[i]});
  }
  csv::Writer fields(fields_path);
  for (const RVector& f : traj.fields) fields.row(f);
}

}  // namespace qcl
