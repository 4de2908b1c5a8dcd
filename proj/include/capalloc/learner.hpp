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

// Learns a capability matrix A and requirement thresholds b from positive
// team samples by solving one small LP per capability row:
//
//   maximize   (alpha_b / |M|) * sum_i b_ci + alpha_a * min_{k in A1(c)} a_ck
//   subject to sum_k y_k a_ck >= b_ci   for every positive sample y of task i
//              sum_k a_ck = 1,  a >= 0,  b >= 0
//
// with the entries known to be zero removed from the problem entirely.

#ifndef CAPALLOC_LEARNER_HPP_
#define CAPALLOC_LEARNER_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "capalloc/lp.hpp"
#include "capalloc/model.hpp"

namespace capalloc {

struct LearnerConfig {
  double alpha_b = 1.0;
  double alpha_a = 0.25;
  /// Tolerance used when re-classifying training positives.
  double feasibility_tolerance = kFeasibilityTolerance;
  lp::SimplexOptions simplex;
  /// Worker threads for the per-capability solves (0 = default).
  std::size_t threads = 0;

  void validate() const;
};

/// Bookkeeping for one capability row, written to learn_report.json.
struct CapabilityReport {
  double objective = 0.0;
  lp::SolveStatus status = lp::SolveStatus::Optimal;
  double solve_milliseconds = 0.0;
  std::size_t num_variables = 0;
  /// Distinct positive samples after projection onto the row's support.
  std::size_t num_sample_constraints = 0;
  /// Sample rows present in the final LP.
  std::size_t num_active_constraints = 0;
  std::size_t rounds = 0;
  /// Single-entry support: solved in closed form.
  bool closed_form = false;
};

struct LearnedModel {
  CapabilityMatrix A;
  RequirementSet b;
  std::vector<double> per_capability_objectives;
  std::vector<lp::SolveStatus> statuses;
  std::vector<CapabilityReport> reports;

  double total_objective() const;
};

class NoPositiveSamples : public DomainError {
 public:
  NoPositiveSamples(std::size_t task, std::size_t capability);
  std::size_t task;
  std::size_t capability;
};

class InfeasibleLp : public DomainError {
 public:
  InfeasibleLp(std::size_t capability, lp::SolveStatus status);
  std::size_t capability;
  lp::SolveStatus status;
};

/// Per-capability decomposition. Only samples with is_valid = true enter the
/// constraints. training.size() must equal sparsity.num_tasks().
LearnedModel learn(const TrainingSet& training, const SparsityPattern& sparsity, const LearnerConfig& config = {});

/// The same problem posed as one joint LP over every row at once, without
/// deduplication, constraint generation or closed-form shortcuts. Only meant
/// as a cross-check for learn().
LearnedModel learn_joint_reference(const TrainingSet& training, const SparsityPattern& sparsity,
                                   const LearnerConfig& config = {});

}  // namespace capalloc

#endif  // CAPALLOC_LEARNER_HPP_
