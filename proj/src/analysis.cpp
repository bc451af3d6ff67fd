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

#include "qcl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qcl/csv.hpp"
#include "qcl/landscape.hpp"
#include "qcl/parallel.hpp"
#include "qcl/rng.hpp"

namespace qcl {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void check_common_grid(const std::vector<ControlField>& a, const std::vector<ControlField>& b) {
  const TimeGrid& ref = a.empty() ? b.front().grid : a.front().grid;
  for (const auto* list : {&a, &b}) {
    for (const auto& f : *list) {
      if (!(f.grid == ref)) throw InvalidArgument("pairwise distances need a common time grid");
    }
  }
}

// Derivative of f over a nonuniform abscissa: three-point centered formula
// inside, one-sided at the ends.
std::vector<double> derivative(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = (f[1] - f[0]) / (x[1] - x[0]);
  d[n - 1] = (f[n - 1] - f[n - 2]) / (x[n - 1] - x[n - 2]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h1 = x[k] - x[k - 1];
    const double h2 = x[k + 1] - x[k];
    d[k] = (h1 * h1 * f[k + 1] - h2 * h2 * f[k - 1] + (h2 * h2 - h1 * h1) * f[k]) / (h1 * h2 * (h1 + h2));
  }
  return d;
}

double reflect_unit(double x) {
  double r = std::fmod(std::abs(x), 2.0);
  return r > 1.0 ? 2.0 - r : r;
}

}  // namespace

RunRecord make_record(int run_id, std::uint64_t seed, const FlowTrajectory& traj) {
  RunRecord r;
  r.run_id = run_id;
  r.seed = seed;
  r.d_pl = path_length(traj);
  r.d_el = euclidean_distance(traj.front(), traj.back());
  r.r_value = r.d_pl / r.d_el;
  r.j_start = traj.j_values.front();
  r.j_end = traj.j_values.back();
  r.n_steps = static_cast<int>(traj.size()) - 1;
  r.initial_field = traj.front();
  r.final_field = traj.back();
  return r;
}

std::vector<double> pairwise_distances(const std::vector<ControlField>& fields_a,
                                       const std::vector<ControlField>& fields_b, PairMode mode, bool matched_only) {
  const std::vector<ControlField>& primary = mode == PairMode::within_b ? fields_b : fields_a;
  if (primary.empty() || (mode == PairMode::cross && fields_b.empty())) {
    throw InvalidArgument("pairwise distances need nonempty field lists");
  }
  check_common_grid(mode == PairMode::within_b ? fields_b : fields_a, mode == PairMode::cross ? fields_b : primary);
  std::vector<double> out;
  if (mode != PairMode::cross) {
    out.reserve(primary.size() * (primary.size() - 1) / 2);
    for (std::size_t i = 0; i < primary.size(); ++i) {
      for (std::size_t j = i + 1; j < primary.size(); ++j) out.push_back(euclidean_distance(primary[i], primary[j]));
    }
    return out;
  }
  if (matched_only) {
    if (fields_a.size() != fields_b.size()) throw InvalidArgument("matched pairs need equally long lists");
    for (std::size_t i = 0; i < fields_a.size(); ++i) out.push_back(euclidean_distance(fields_a[i], fields_b[i]));
    return out;
  }
  out.reserve(fields_a.size() * fields_b.size());
  for (const auto& a : fields_a) {
    for (const auto& b : fields_b) out.push_back(euclidean_distance(a, b));
  }
  return out;
}

std::pair<std::vector<RunRecord>, std::vector<RunRecord>> split_by_r(const std::vector<RunRecord>& records, int k) {
  if (k < 0 || 2 * static_cast<std::size_t>(k) > records.size()) {
    throw InvalidArgument("split size k must satisfy 0 <= 2k <= record count");
  }
  std::vector<RunRecord> sorted = records;
  std::stable_sort(sorted.begin(), sorted.end(), [](const RunRecord& a, const RunRecord& b) {
    if (a.r_value != b.r_value) return a.r_value < b.r_value;
    return a.run_id < b.run_id;
  });
  std::vector<RunRecord> low(sorted.begin(), sorted.begin() + k);
  std::vector<RunRecord> high(sorted.end() - k, sorted.end());
  return {std::move(low), std::move(high)};
}

long Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), 0L); }

void Histogram::write_csv(const std::string& path) const {
  csv::Writer w(path);
  w.header({"bin_lower", "bin_upper", "count"});
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double lo = lower + static_cast<double>(i) * bin_width;
    w.row(std::vector<double>{lo, lo + bin_width, static_cast<double>(counts[i])});
  }
}

Histogram make_histogram(const std::vector<double>& values, double lower, double bin_width) {
  if (!(bin_width > 0.0)) throw InvalidArgument("histogram bin width must be positive");
  Histogram h;
  h.lower = lower;
  h.bin_width = bin_width;
  if (values.empty()) return h;
  h.max = *std::max_element(values.begin(), values.end());
  h.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  h.median = median_of(values);
  const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil((h.max - lower) / bin_width)));
  h.counts.assign(bins, 0);
  for (double v : values) {
    const double pos = std::floor((v - lower) / bin_width);
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++h.counts[idx];
  }
  return h;
}

Histogram r_histogram(const std::vector<RunRecord>& records, double bin_width) {
  std::vector<double> r;
  r.reserve(records.size());
  for (const auto& rec : records) r.push_back(rec.r_value);
  return make_histogram(r, 1.0, bin_width);
}

std::vector<EigenRelationSample> eigen_relation_scan(const QuantumSystem& system, const Objective& objective,
                                                     const FlowTrajectory& traj, const EigenScanOptions& options) {
  if (options.stride < 1) throw InvalidArgument("eigen-relation stride must be positive");
  if (traj.size() < 3) throw InvalidArgument("eigen-relation scan needs at least 3 trajectory samples");
  const TimeGrid& grid = traj.grid;
  const RVector w = grid.weights();
  const RVector w_sqrt = w.cwiseSqrt();
  const RVector delta = traj.fields.back() - traj.fields.front();
  const double cutoff = options.mask_fraction * delta.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> mask;
  for (Eigen::Index t = 0; t < delta.size(); ++t) {
    if (std::abs(delta[t]) >= cutoff && delta[t] != 0.0) mask.push_back(t);
  }
  if (mask.empty()) throw InvalidArgument("field displacement vanishes; rho' mask is empty");
  double mask_weight = 0.0;
  for (auto t : mask) mask_weight += w[t];

  // Flow velocity dE/ds = sign * g, with sign = +1 on ascent.
  const double sign = traj.j_values.back() >= traj.j_values.front() ? 1.0 : -1.0;
  const std::size_t n = traj.size();
  std::vector<RVector> grads(n);
  parallel_for(n, options.workers, [&](std::size_t k) { grads[k] = gradient(system, objective, traj.field(k)).values; });
  std::vector<double> rho_prime(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (auto t : mask) acc += w[t] * sign * grads[k][t] / delta[t];
    rho_prime[k] = acc / mask_weight;
  }
  const std::vector<double> rho_second = derivative(traj.s_values, rho_prime);

  std::vector<EigenRelationSample> out;
  for (std::size_t k = 0; k < n; k += static_cast<std::size_t>(options.stride)) {
    EigenRelationSample smp;
    smp.s = traj.s_values[k];
    smp.j = traj.j_values[k];
    const HessianMatrix h = hessian(system, objective, traj.field(k), options.workers);
    const RVector& g = grads[k];
    const double norm = std::sqrt(inner(grid, g, g));
    const RVector x = w_sqrt.cwiseProduct(g) / norm;  // unit vector for the weighted operator
    const RMatrix op = w_sqrt.asDiagonal() * h.values * w_sqrt.asDiagonal();
    smp.rayleigh = x.dot(op * x);
    Eigen::SelfAdjointEigenSolver<RMatrix> es(op, Eigen::EigenvaluesOnly);
    smp.hessian_spectrum.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    smp.nearest_eig_gap = std::numeric_limits<double>::infinity();
    for (double e : smp.hessian_spectrum) smp.nearest_eig_gap = std::min(smp.nearest_eig_gap, std::abs(smp.rayleigh - e));
    smp.rho_prime = rho_prime[k];
    smp.rho_ratio = sign * rho_second[k] / rho_prime[k];
    out.push_back(std::move(smp));
  }
  return out;
}

void write_eigen_relation_csv(const std::vector<EigenRelationSample>& samples, const std::string& path) {
  csv::Writer w(path);
  w.header({"s", "J", "rayleigh", "rho_ratio", "nearest_eig_gap", "spectrum_min", "spectrum_max"});
  for (const auto& s : samples) {
    const double lo = s.hessian_spectrum.empty() ? 0.0 : s.hessian_spectrum.front();
    const double hi = s.hessian_spectrum.empty() ? 0.0 : s.hessian_spectrum.back();
    w.row(std::vector<double>{s.s, s.j, s.rayleigh, s.rho_ratio, s.nearest_eig_gap, lo, hi});
  }
}

void write_eigen_spectrum_csv(const std::vector<EigenRelationSample>& samples, const std::string& path) {
  csv::Writer w(path);
  std::vector<std::string> names{"s"};
  const std::size_t width = samples.empty() ? 0 : samples.front().hessian_spectrum.size();
  for (std::size_t i = 0; i < width; ++i) names.push_back("eig" + std::to_string(i));
  w.header(names);
  for (const auto& s : samples) {
    std::vector<double> row{s.s};
    row.insert(row.end(), s.hessian_spectrum.begin(), s.hessian_spectrum.end());
    w.row(row);
  }
}

int es_population(int dimension) { return 4 + static_cast<int>(std::floor(3.0 * std::log(dimension))); }

FieldParameters decode_parameters(const std::vector<double>& x) {
  const std::size_t m = x.size() / 2;
  FieldParameters p;
  p.amplitudes.resize(m);
  p.phases.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    p.amplitudes[i] = reflect_unit(x[i]);
    double frac = x[m + i] - std::floor(x[m + i]);
    p.phases[i] = 2.0 * std::numbers::pi * frac;
  }
  return p;
}

SearchResult straight_shot_search(const QuantumSystem& system, const Objective& objective, const TimeGrid& grid,
                                  const FlowConfig& flow_config, const SearchOptions& options) {
  const int n = 2 * options.field_components;
  if (options.field_components < 1) throw InvalidArgument("search needs at least one field component");
  const int lambda = es_population(n);
  const int mu = lambda / 2;
  if (options.budget < lambda) throw InvalidArgument("search budget is smaller than the population");
  flow_config.validate();
  FlowConfig loose = flow_config;
  loose.rel_step_tolerance *= options.tolerance_relaxation;
  loose.record_every_step = true;

  std::vector<double> weights(mu);
  for (int i = 0; i < mu; ++i) weights[i] = std::log(mu + 0.5) - std::log(i + 1.0);
  const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& v : weights) v /= wsum;
  double w2 = 0.0;
  for (double v : weights) w2 += v * v;
  const double mu_eff = 1.0 / w2;
  const double dn = n;
  const double c_sigma = (mu_eff + 2.0) / (dn + mu_eff + 5.0);
  const double d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (dn + 1.0)) - 1.0) + c_sigma;
  const double c_c = (4.0 + mu_eff / dn) / (dn + 4.0 + 2.0 * mu_eff / dn);
  const double sep = (dn + 2.0) / 3.0;
  const double c_1 = std::min(1.0, sep * 2.0 / ((dn + 1.3) * (dn + 1.3) + mu_eff));
  const double c_mu =
      std::min(1.0 - c_1, sep * 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((dn + 2.0) * (dn + 2.0) + mu_eff));
  const double chi_n = std::sqrt(dn) * (1.0 - 1.0 / (4.0 * dn) + 1.0 / (21.0 * dn * dn));

  RVector mean(n);
  {
    auto rng = CounterRng::substream(options.seed, 0, "es-init");
    for (int i = 0; i < n; ++i) mean[i] = rng.uniform();
  }
  double sigma = options.initial_step;
  RVector cov = RVector::Ones(n);
  RVector p_sigma = RVector::Zero(n), p_c = RVector::Zero(n);

  SearchResult result;
  result.best_search_r = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;

  auto fitness = [&](const std::vector<double>& x, bool& failed) {
    failed = false;
    try {
      const ControlField f = field_from_parameters(grid, decode_parameters(x));
      return ratio_r(climb(system, objective, f, loose));
    } catch (const Error&) {
      failed = true;
      return std::numeric_limits<double>::infinity();
    }
  };

  for (int gen = 0; result.evaluations + lambda <= options.budget; ++gen) {
    std::vector<RVector> z(lambda), y(lambda);
    std::vector<std::vector<double>> xs(lambda);
    const RVector scale = cov.cwiseSqrt();
    for (int i = 0; i < lambda; ++i) {
      auto rng = CounterRng::substream(options.seed, static_cast<std::uint64_t>(gen) * lambda + i, "es-sample");
      z[i].resize(n);
      for (int c = 0; c < n; ++c) z[i][c] = rng.normal();
      y[i] = scale.cwiseProduct(z[i]);
      const RVector x = mean + sigma * y[i];
      xs[i].assign(x.data(), x.data() + n);
    }
    std::vector<double> fit(lambda);
    std::vector<char> failed(lambda, 0);
    parallel_for(static_cast<std::size_t>(lambda), options.workers, [&](std::size_t i) {
      bool f = false;
      fit[i] = fitness(xs[i], f);
      failed[i] = f;
    });
    result.evaluations += lambda;
    for (char f : failed) result.failed_evaluations += f;

    std::vector<int> order(lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fit[a] < fit[b]; });
    if (fit[order[0]] < result.best_search_r) {
      result.best_search_r = fit[order[0]];
      best_x = xs[order[0]];
    }
    result.generation_best.push_back(result.best_search_r);
    if (options.stop_below && result.best_search_r <= *options.stop_below) break;

    RVector y_w = RVector::Zero(n), z_w = RVector::Zero(n), rank_mu = RVector::Zero(n);
    for (int i = 0; i < mu; ++i) {
      y_w += weights[i] * y[order[i]];
      z_w += weights[i] * z[order[i]];
      rank_mu += weights[i] * y[order[i]].cwiseAbs2();
    }
    mean += sigma * y_w;
    p_sigma = (1.0 - c_sigma) * p_sigma + std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * z_w;
    const double ps_norm = p_sigma.norm();
    const bool h_sigma =
        ps_norm / std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * (gen + 1))) < (1.4 + 2.0 / (dn + 1.0)) * chi_n;
    p_c = (1.0 - c_c) * p_c + (h_sigma ? std::sqrt(c_c * (2.0 - c_c) * mu_eff) : 0.0) * y_w;
    const double delta = h_sigma ? 0.0 : c_c * (2.0 - c_c);
    cov = (1.0 - c_1 - c_mu) * cov + c_1 * (p_c.cwiseAbs2() + delta * cov) + c_mu * rank_mu;
    sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));
  }

  if (best_x.empty()) throw FlowError(FlowError::Kind::stalled, "straight-shot search found no valid candidate");
  result.best_parameters = decode_parameters(best_x);
  result.best_field = field_from_parameters(grid, result.best_parameters);
  result.best_r = ratio_r(climb(system, objective, result.best_field, flow_config));
  return result;
}

}  // namespace qcl
