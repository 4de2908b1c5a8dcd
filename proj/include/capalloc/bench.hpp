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

// Synthetic ground-truth benchmark: random capability models, team pools
// drawn from the lattice [0, n_s]^|K|, exact indicator labels, and the
// entire / random-subset training study with optional sparsity noise.

#ifndef CAPALLOC_BENCH_HPP_
#define CAPALLOC_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "capalloc/learner.hpp"
#include "capalloc/model.hpp"

namespace capalloc::bench {

using Rng = std::mt19937_64;

/// Uniform double in [lo, hi) from the raw 64-bit stream; independent of the
/// standard library's distribution implementations.
double uniform(Rng& rng, double lo, double hi);
/// Uniform integer in [0, n).
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);
/// Deterministic child seed for stream `index` of a master seed.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t index);

struct CaseSpec {
  std::size_t num_tasks = 8;
  std::size_t num_agent_types = 6;
  std::size_t num_capabilities = 8;
  Count per_type_count = 5;
  std::size_t mean_pool_size = 1500;
  std::size_t random_train_cap = 200;
  std::size_t realizations = 10;
  std::uint64_t seed = 0;
  /// Probability that a capability entry / requirement entry is positive.
  double capability_density = 0.7;
  double requirement_density = 0.5;
  /// Thresholds sit at a quantile q ~ U(quantile_low, quantile_high) of the
  /// row's capability values over the task pool.
  double quantile_low = 0.2;
  double quantile_high = 0.8;

  /// (n_s + 1)^|K|.
  std::uint64_t lattice_size() const;
  void validate() const;
};

inline constexpr std::size_t kNumTableCases = 8;

/// Rows 0-7 of the benchmark size table (|M|, |K|, |C|, n_s, mean pool).
CaseSpec table_case(std::size_t index);

struct GroundTruth {
  CapabilityMatrix A;
  RequirementSet b;
  SparsityPattern sparsity;
};

using Pool = std::vector<TeamConfiguration>;

struct SyntheticCase {
  GroundTruth truth;
  std::vector<Pool> pools;
  /// labels[i][l] = ground_truth_label(pools[i][l], truth, i).
  std::vector<std::vector<bool>> labels;
};

/// 1 iff A_g y >= b_g exactly (no tolerance).
bool ground_truth_label(const TeamConfiguration& team, const GroundTruth& truth, TaskId task);

/// Uniform sample without replacement of spec.mean_pool_size lattice points
/// (the whole lattice, shuffled, when the sizes match).
Pool build_pool(const CaseSpec& spec, TaskId task, Rng& rng);

/// Draws sparsity and capabilities, then sets each positive threshold to a
/// random quantile (q ~ U(0.2, 0.8)) of the row's capability over the task's
/// pool. Redraws (at most 100 times) until every pool has both labels.
GroundTruth generate_ground_truth(const CaseSpec& spec, const std::vector<Pool>& pools, Rng& rng);

/// Pools, ground truth and labels for one realization.
SyntheticCase generate_case(const CaseSpec& spec, Rng& rng);

/// Flips round(rate * |C| * |K|) capability-pattern entries chosen uniformly
/// without replacement, skipping flips that would empty a row.
SparsityPattern perturb_sparsity(const SparsityPattern& pattern, double rate, Rng& rng);

enum class TrainingMode { Entire, Random };
const char* to_string(TrainingMode mode);

/// Training set per mode: the whole pool, or at most spec.random_train_cap
/// pool members per task drawn without replacement (both labels kept).
TrainingSet make_training_set(const CaseSpec& spec, const SyntheticCase& data, TrainingMode mode, Rng& rng);

struct PredictionError {
  double error = 0.0;
  double false_positive = 0.0;
  double false_negative = 0.0;
};

/// Disagreement between the learned predicate and the ground-truth labels over
/// every pool, averaged over tasks.
PredictionError evaluate(const LearnedModel& model, const SyntheticCase& data);

struct RealizationResult {
  std::size_t realization = 0;
  bool ok = false;
  std::string failure;
  PredictionError error;
  double train_seconds = 0.0;
};

struct BenchReport {
  std::string case_label;
  TrainingMode mode = TrainingMode::Random;
  double sparsity_error = 0.0;
  std::vector<RealizationResult> realizations;

  std::size_t num_ok() const;
  double mean_error() const;
  double mean_false_positive() const;
  double mean_false_negative() const;
  double mean_train_seconds() const;
};

struct BenchOptions {
  LearnerConfig learner;
  /// Realizations run concurrently on this many workers (0 = default); the
  /// learner itself then runs single-threaded inside each realization.
  std::size_t threads = 0;
};

/// Runs spec.realizations independent realizations seeded from spec.seed.
/// Learner failures are recorded per realization instead of aborting.
struct RealizationInputs {
  SyntheticCase data;
  TrainingSet training;
  /// Ground-truth pattern, perturbed when a sparsity error rate is given.
  SparsityPattern sparsity;
};

/// Everything realization r of run_case feeds the learner, reproducible on
/// its own from spec.seed.
RealizationInputs realization_inputs(const CaseSpec& spec, TrainingMode mode, double sparsity_error_rate,
                                     std::size_t realization);

BenchReport run_case(const CaseSpec& spec, TrainingMode mode, double sparsity_error_rate,
                     const BenchOptions& options = {}, const std::string& case_label = "custom");

/// True iff at least ceil(pass_fraction * n) of the n draws are <= threshold.
bool stochastic_label(std::span<const double> draws, double threshold, double pass_fraction = 0.8);

/// report.csv: case,realization,mode,sparsity_error,pred_error,false_pos,false_neg,train_seconds
void write_report_csv_header(std::ostream& out);
void write_report_csv_rows(std::ostream& out, const BenchReport& report, bool include_timing = true);

}  // namespace capalloc::bench

#endif  // CAPALLOC_BENCH_HPP_
