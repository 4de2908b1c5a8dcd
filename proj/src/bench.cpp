// Copyright 2026 The capalloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "capalloc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "capalloc/parallel.hpp"

namespace capalloc::bench {

double uniform(Rng& rng, double lo, double hi) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  if (n == 0) throw ContractError("uniform_index over an empty range");
  const std::uint64_t limit = Rng::max() - Rng::max() % n;
  for (;;) {
    const std::uint64_t v = rng();
    if (v < limit) return v % n;
  }
}

std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over the combined key
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CaseSpec::lattice_size() const {
  std::uint64_t size = 1;
  for (std::size_t k = 0; k < num_agent_types; ++k) size *= static_cast<std::uint64_t>(per_type_count) + 1;
  return size;
}

void CaseSpec::validate() const {
  if (num_tasks == 0 || num_agent_types == 0 || num_capabilities == 0 || per_type_count == 0 ||
      mean_pool_size == 0 || random_train_cap == 0 || realizations == 0) {
    throw ContractError("case spec sizes must all be positive");
  }
  if (num_agent_types > 16) throw ContractError("at most 16 agent types are supported");
  if (mean_pool_size > lattice_size()) {
    throw ContractError("pool size " + std::to_string(mean_pool_size) + " exceeds the lattice size " +
                        std::to_string(lattice_size()));
  }
  if (random_train_cap > mean_pool_size) throw ContractError("random training cap exceeds the pool size");
  if (!(capability_density > 0.0 && capability_density <= 1.0) ||
      !(requirement_density > 0.0 && requirement_density <= 1.0)) {
    throw ContractError("densities must lie in (0, 1]");
  }
  if (!(quantile_low >= 0.0 && quantile_low <= quantile_high && quantile_high <= 1.0)) {
    throw ContractError("threshold quantiles must satisfy 0 <= low <= high <= 1");
  }
}

CaseSpec table_case(std::size_t index) {
  struct Row {
    std::size_t m, k, c, pool;
  };
  static constexpr Row rows[kNumTableCases] = {
      {8, 6, 8, 1500},  {8, 6, 8, 6000},  {8, 6, 16, 6000},  {8, 6, 32, 6000},
      {20, 6, 8, 7500}, {40, 6, 8, 7500}, {40, 6, 16, 7500}, {40, 6, 32, 7500},
  };
  if (index >= kNumTableCases) throw ContractError("table case index must be 0-7");
  CaseSpec spec;
  spec.num_tasks = rows[index].m;
  spec.num_agent_types = rows[index].k;
  spec.num_capabilities = rows[index].c;
  spec.per_type_count = 5;
  spec.mean_pool_size = rows[index].pool;
  return spec;
}

bool ground_truth_label(const TeamConfiguration& team, const GroundTruth& truth, TaskId task) {
  if (task.index >= truth.b.num_tasks()) throw ContractError("task index out of range");
  return classify(team, truth.A, truth.b.task(task), 0.0);
}

Pool build_pool(const CaseSpec& spec, TaskId, Rng& rng) {
  spec.validate();
  const std::uint64_t lattice = spec.lattice_size();
  const std::size_t wanted = spec.mean_pool_size;
  const std::uint64_t base = static_cast<std::uint64_t>(spec.per_type_count) + 1;
  std::vector<std::uint64_t> index(lattice);
  std::iota(index.begin(), index.end(), 0);
  // Partial Fisher-Yates: the first `wanted` slots become the sample.
  for (std::size_t l = 0; l < wanted; ++l) {
    const std::uint64_t j = l + uniform_index(rng, lattice - l);
    std::swap(index[l], index[j]);
  }
  Pool pool;
  pool.reserve(wanted);
  for (std::size_t l = 0; l < wanted; ++l) {
    std::vector<Count> y(spec.num_agent_types);
    std::uint64_t code = index[l];
    for (std::size_t k = 0; k < spec.num_agent_types; ++k) {
      y[k] = static_cast<Count>(code % base);
      code /= base;
    }
    pool.emplace_back(std::move(y));
  }
  return pool;
}

namespace {

std::vector<bool> label_pool(const Pool& pool, const GroundTruth& truth, std::size_t task) {
  std::vector<bool> labels(pool.size());
  for (std::size_t l = 0; l < pool.size(); ++l) labels[l] = ground_truth_label(pool[l], truth, TaskId(task));
  return labels;
}

}  // namespace

GroundTruth generate_ground_truth(const CaseSpec& spec, const std::vector<Pool>& pools, Rng& rng) {
  spec.validate();
  if (pools.size() != spec.num_tasks) throw ContractError("need one pool per task");
  const std::size_t C = spec.num_capabilities, K = spec.num_agent_types, M = spec.num_tasks;
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<std::vector<bool>> cap(C, std::vector<bool>(K)), req(C, std::vector<bool>(M));
    for (std::size_t c = 0; c < C; ++c) {
      bool any = false;
      while (!any) {
        for (std::size_t k = 0; k < K; ++k) {
          cap[c][k] = uniform(rng, 0.0, 1.0) < spec.capability_density;
          any = any || cap[c][k];
        }
      }
    }
    for (std::size_t i = 0; i < M; ++i) {
      bool any = false;
      while (!any) {
        for (std::size_t c = 0; c < C; ++c) {
          req[c][i] = uniform(rng, 0.0, 1.0) < spec.requirement_density;
          any = any || req[c][i];
        }
      }
    }
    SparsityPattern sparsity(cap, req);

    DenseMatrix a(C, K);
    for (std::size_t c = 0; c < C; ++c) {
      double sum = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        if (cap[c][k]) {
          a(c, k) = uniform(rng, 0.2, 1.0);
          sum += a(c, k);
        }
      }
      for (std::size_t k = 0; k < K; ++k) a(c, k) /= sum;
    }
    CapabilityMatrix A(a);

    DenseMatrix b(M, C);
    std::vector<double> values;
    for (std::size_t i = 0; i < M; ++i) {
      for (std::size_t c = 0; c < C; ++c) {
        if (!req[c][i]) continue;
        const double q = uniform(rng, spec.quantile_low, spec.quantile_high);
        values.clear();
        for (const auto& y : pools[i]) values.push_back(team_capability(y, A)[c]);
        const auto nth = values.begin() + static_cast<std::ptrdiff_t>(std::floor(q * (values.size() - 1)));
        std::nth_element(values.begin(), nth, values.end());
        b(i, c) = *nth;
      }
    }
    GroundTruth truth{std::move(A), RequirementSet(std::move(b)), std::move(sparsity)};

    bool mixed = true;
    for (std::size_t i = 0; i < M && mixed; ++i) {
      const auto labels = label_pool(pools[i], truth, i);
      const auto positives = std::count(labels.begin(), labels.end(), true);
      mixed = positives > 0 && static_cast<std::size_t>(positives) < labels.size();
    }
    if (mixed) return truth;
  }
  throw DomainError("could not draw a ground truth with mixed labels in " + std::to_string(kMaxAttempts) +
                    " attempts");
}

SyntheticCase generate_case(const CaseSpec& spec, Rng& rng) {
  spec.validate();
  SyntheticCase out;
  for (std::size_t i = 0; i < spec.num_tasks; ++i) out.pools.push_back(build_pool(spec, TaskId(i), rng));
  out.truth = generate_ground_truth(spec, out.pools, rng);
  for (std::size_t i = 0; i < spec.num_tasks; ++i) out.labels.push_back(label_pool(out.pools[i], out.truth, i));
  return out;
}

SparsityPattern perturb_sparsity(const SparsityPattern& pattern, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 0.5)) throw ContractError("sparsity error rate must lie in [0, 0.5]");
  const std::size_t C = pattern.num_capabilities(), K = pattern.num_agent_types();
  const auto flips = static_cast<std::size_t>(std::llround(rate * static_cast<double>(C * K)));
  std::vector<std::size_t> order(C * K);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t l = 0; l + 1 < order.size(); ++l) {
    std::swap(order[l], order[l + uniform_index(rng, order.size() - l)]);
  }
  SparsityPattern out = pattern;
  std::size_t done = 0;
  for (std::size_t e : order) {
    if (done == flips) break;
    const std::size_t c = e / K, k = e % K;
    const bool positive = out.capability_positive(c, k);
    if (positive && out.support(c).size() == 1) continue;
    out = out.with_capability(c, k, !positive);
    ++done;
  }
  return out;
}

const char* to_string(TrainingMode mode) { return mode == TrainingMode::Entire ? "entire" : "random"; }

TrainingSet make_training_set(const CaseSpec& spec, const SyntheticCase& data, TrainingMode mode, Rng& rng) {
  TrainingSet training(data.pools.size());
  for (std::size_t i = 0; i < data.pools.size(); ++i) {
    const auto& pool = data.pools[i];
    std::vector<std::size_t> chosen(pool.size());
    std::iota(chosen.begin(), chosen.end(), 0);
    if (mode == TrainingMode::Random && spec.random_train_cap < pool.size()) {
      for (std::size_t l = 0; l < spec.random_train_cap; ++l) {
        std::swap(chosen[l], chosen[l + uniform_index(rng, chosen.size() - l)]);
      }
      chosen.resize(spec.random_train_cap);
    }
    training[i].reserve(chosen.size());
    for (std::size_t l : chosen) {
      const bool label = data.labels[i][l];
      training[i].push_back({pool[l], label ? 1.0 : 0.0, label});
    }
  }
  return training;
}

PredictionError evaluate(const LearnedModel& model, const SyntheticCase& data) {
  PredictionError out;
  const std::size_t M = data.pools.size();
  if (model.b.num_tasks() != M) throw ContractError("model and data disagree on the number of tasks");
  for (std::size_t i = 0; i < M; ++i) {
    const auto& pool = data.pools[i];
    std::size_t fp = 0, fn = 0;
    for (std::size_t l = 0; l < pool.size(); ++l) {
      const bool predicted = classify(pool[l], model.A, model.b.task(i));
      const bool truth = data.labels[i][l];
      if (predicted && !truth) ++fp;
      if (!predicted && truth) ++fn;
    }
    const double n = static_cast<double>(pool.size());
    out.false_positive += static_cast<double>(fp) / n;
    out.false_negative += static_cast<double>(fn) / n;
  }
  out.false_positive /= static_cast<double>(M);
  out.false_negative /= static_cast<double>(M);
  out.error = out.false_positive + out.false_negative;
  return out;
}

std::size_t BenchReport::num_ok() const {
  return static_cast<std::size_t>(
      std::count_if(realizations.begin(), realizations.end(), [](const auto& r) { return r.ok; }));
}

namespace {

template <typename F>
double mean_over_ok(const std::vector<RealizationResult>& rs, F field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : rs) {
    if (!r.ok) continue;
    sum += field(r);
    ++n;
  }
  return n == 0 ? std::nan("") : sum / static_cast<double>(n);
}

}  // namespace

double BenchReport::mean_error() const {
  return mean_over_ok(realizations, [](const auto& r) { return r.error.error; });
}
double BenchReport::mean_false_positive() const {
  return mean_over_ok(realizations, [](const auto& r) { return r.error.false_positive; });
}
double BenchReport::mean_false_negative() const {
  return mean_over_ok(realizations, [](const auto& r) { return r.error.false_negative; });
}
double BenchReport::mean_train_seconds() const {
  return mean_over_ok(realizations, [](const auto& r) { return r.train_seconds; });
}

RealizationInputs realization_inputs(const CaseSpec& spec, TrainingMode mode, double sparsity_error_rate,
                                     std::size_t realization) {
  // Separate streams so the data of a realization does not depend on the
  // mode or on the sparsity noise.
  Rng data_rng(child_seed(spec.seed, 3 * realization));
  Rng train_rng(child_seed(spec.seed, 3 * realization + 1));
  Rng noise_rng(child_seed(spec.seed, 3 * realization + 2));
  RealizationInputs in;
  in.data = generate_case(spec, data_rng);
  in.training = make_training_set(spec, in.data, mode, train_rng);
  in.sparsity = sparsity_error_rate > 0.0 ? perturb_sparsity(in.data.truth.sparsity, sparsity_error_rate, noise_rng)
                                          : in.data.truth.sparsity;
  return in;
}

BenchReport run_case(const CaseSpec& spec, TrainingMode mode, double sparsity_error_rate,
                     const BenchOptions& options, const std::string& case_label) {
  spec.validate();
  if (!(sparsity_error_rate >= 0.0 && sparsity_error_rate <= 0.5)) {
    throw ContractError("sparsity error rate must lie in [0, 0.5]");
  }
  BenchReport report;
  report.case_label = case_label;
  report.mode = mode;
  report.sparsity_error = sparsity_error_rate;
  report.realizations.resize(spec.realizations);

  const std::size_t workers = options.threads == 0 ? default_worker_count() : options.threads;
  LearnerConfig learner = options.learner;
  if (workers > 1) learner.threads = 1;

  parallel_for(
      spec.realizations,
      [&](std::size_t r) {
        auto& out = report.realizations[r];
        out.realization = r;
        try {
          const RealizationInputs in = realization_inputs(spec, mode, sparsity_error_rate, r);
          const auto start = std::chrono::steady_clock::now();
          const LearnedModel model = learn(in.training, in.sparsity, learner);
          out.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          out.error = evaluate(model, in.data);
          out.ok = true;
        } catch (const DomainError& e) {
          out.ok = false;
          out.failure = e.what();
        }
      },
      workers);
  return report;
}

bool stochastic_label(std::span<const double> draws, double threshold, double pass_fraction) {
  if (draws.empty()) throw ContractError("stochastic labeling needs at least one draw");
  if (!(pass_fraction > 0.0 && pass_fraction <= 1.0)) throw ContractError("pass fraction must lie in (0, 1]");
  const auto needed = static_cast<std::size_t>(std::ceil(pass_fraction * static_cast<double>(draws.size()) - 1e-9));
  const auto passed = static_cast<std::size_t>(
      std::count_if(draws.begin(), draws.end(), [threshold](double d) { return d <= threshold; }));
  return passed >= needed;
}

void write_report_csv_header(std::ostream& out) {
  out << "case,realization,mode,sparsity_error,pred_error,false_pos,false_neg,train_seconds\n";
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_report_csv_rows(std::ostream& out, const BenchReport& report, bool include_timing) {
  for (const auto& r : report.realizations) {
    const double nan = std::nan("");
    out << report.case_label << ',' << r.realization + 1 << ',' << to_string(report.mode) << ','
        << fmt(report.sparsity_error) << ',' << fmt(r.ok ? r.error.error : nan) << ','
        << fmt(r.ok ? r.error.false_positive : nan) << ',' << fmt(r.ok ? r.error.false_negative : nan) << ','
        << fmt(!r.ok ? nan : (include_timing ? r.train_seconds : 0.0)) << '\n';
  }
}

}  // namespace capalloc::bench
