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

#include "capalloc/learner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "capalloc/parallel.hpp"

namespace capalloc {

void LearnerConfig::validate() const {
  if (!(alpha_b > 0.0)) throw ContractError("alpha_b must be positive");
  if (!(alpha_a >= 0.0)) throw ContractError("alpha_a must be nonnegative");
  if (!(feasibility_tolerance >= 0.0)) throw ContractError("feasibility tolerance must be nonnegative");
}

double LearnedModel::total_objective() const {
  return std::accumulate(per_capability_objectives.begin(), per_capability_objectives.end(), 0.0);
}

NoPositiveSamples::NoPositiveSamples(std::size_t task_index, std::size_t capability_index)
    : DomainError("task " + std::to_string(task_index + 1) + " requires capability " +
                  std::to_string(capability_index + 1) + " but has no positive samples"),
      task(task_index),
      capability(capability_index) {}

InfeasibleLp::InfeasibleLp(std::size_t capability_index, lp::SolveStatus solve_status)
    : DomainError("learning LP for capability " + std::to_string(capability_index + 1) + " ended " +
                  lp::to_string(solve_status)),
      capability(capability_index),
      status(solve_status) {}

namespace {

using Clock = std::chrono::steady_clock;

void check_inputs(const TrainingSet& training, const SparsityPattern& sparsity, const LearnerConfig& config) {
  config.validate();
  if (training.size() != sparsity.num_tasks()) {
    throw ContractError("training set has " + std::to_string(training.size()) + " tasks, sparsity pattern has " +
                        std::to_string(sparsity.num_tasks()));
  }
  check_training_dimensions(training, sparsity.num_agent_types());
  for (std::size_t c = 0; c < sparsity.num_capabilities(); ++c) {
    for (std::size_t i : sparsity.required_tasks(c)) {
      const bool any = std::any_of(training[i].begin(), training[i].end(),
                                   [](const TrainingSample& s) { return s.is_valid; });
      if (!any) throw NoPositiveSamples(i, c);
    }
  }
}

// Distinct positive samples of one task projected onto a row's support,
// stored flat with stride = support size, in lexicographic order.
struct ProjectedSamples {
  std::size_t stride = 0;
  std::vector<Count> flat;

  std::size_t size() const { return stride == 0 ? 0 : flat.size() / stride; }
  const Count* at(std::size_t l) const { return flat.data() + l * stride; }
};

ProjectedSamples project_positives(const std::vector<TrainingSample>& samples,
                                   const std::vector<std::size_t>& support) {
  std::vector<std::vector<Count>> rows;
  for (const auto& s : samples) {
    if (!s.is_valid) continue;
    std::vector<Count> p(support.size());
    for (std::size_t j = 0; j < support.size(); ++j) p[j] = s.team[support[j]];
    rows.push_back(std::move(p));
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  ProjectedSamples out;
  out.stride = support.size();
  out.flat.reserve(rows.size() * support.size());
  for (const auto& r : rows) out.flat.insert(out.flat.end(), r.begin(), r.end());
  return out;
}

struct RowSolution {
  std::vector<double> a;  // over the support
  std::vector<double> b;  // over the required tasks
  CapabilityReport report;
};

RowSolution solve_closed_form(const std::vector<ProjectedSamples>& positives, double weight_b,
                              const LearnerConfig& config) {
  RowSolution out;
  out.a = {1.0};
  out.report.closed_form = true;
  out.report.objective = config.alpha_a;
  for (const auto& p : positives) {
    Count lowest = std::numeric_limits<Count>::max();
    for (std::size_t l = 0; l < p.size(); ++l) lowest = std::min(lowest, p.at(l)[0]);
    out.b.push_back(static_cast<double>(lowest));
    out.report.objective += weight_b * static_cast<double>(lowest);
    out.report.num_sample_constraints += p.size();
  }
  out.report.num_active_constraints = positives.size();
  return out;
}

// Constraint generation: start from one sample row per task, add the most
// violated sample of every task, re-solve, until every positive holds.
RowSolution solve_row(std::size_t capability, const std::vector<ProjectedSamples>& positives,
                      std::size_t support_size, double weight_b, const LearnerConfig& config) {
  const std::size_t num_tasks = positives.size();
  std::vector<std::vector<std::size_t>> active(num_tasks);
  std::size_t total = 0;
  for (std::size_t t = 0; t < num_tasks; ++t) {
    const auto& p = positives[t];
    total += p.size();
    std::size_t best = 0;
    Count best_sum = std::numeric_limits<Count>::max();
    for (std::size_t l = 0; l < p.size(); ++l) {
      const Count sum = std::accumulate(p.at(l), p.at(l) + p.stride, Count{0});
      if (sum < best_sum) {
        best_sum = sum;
        best = l;
      }
    }
    active[t].push_back(best);
  }

  RowSolution out;
  out.report.num_sample_constraints = total;
  out.report.num_variables = support_size + num_tasks + 1;
  for (std::size_t round = 1;; ++round) {
    lp::LinearProgram lp(lp::Sense::Maximize);
    std::vector<std::size_t> a_var(support_size), b_var(num_tasks);
    for (std::size_t k = 0; k < support_size; ++k) a_var[k] = lp.add_variable(0.0);
    for (std::size_t t = 0; t < num_tasks; ++t) b_var[t] = lp.add_variable(weight_b);
    const std::size_t t_var = lp.add_variable(config.alpha_a);

    std::vector<lp::Term> norm;
    for (std::size_t k = 0; k < support_size; ++k) norm.push_back({a_var[k], 1.0});
    lp.add_constraint(std::move(norm), lp::Relation::Equal, 1.0, "normalize");
    for (std::size_t k = 0; k < support_size; ++k) {
      lp.add_constraint({{t_var, 1.0}, {a_var[k], -1.0}}, lp::Relation::LessEqual, 0.0);
    }
    std::size_t rows = 0;
    for (std::size_t t = 0; t < num_tasks; ++t) {
      for (std::size_t l : active[t]) {
        std::vector<lp::Term> terms;
        const Count* y = positives[t].at(l);
        for (std::size_t k = 0; k < support_size; ++k) {
          if (y[k] != 0) terms.push_back({a_var[k], static_cast<double>(y[k])});
        }
        terms.push_back({b_var[t], -1.0});
        lp.add_constraint(std::move(terms), lp::Relation::GreaterEqual, 0.0);
        ++rows;
      }
    }

    const auto result = lp::solve_lp(lp, config.simplex);
    if (result.status != lp::SolveStatus::Optimal) throw InfeasibleLp(capability, result.status);
    out.a.assign(support_size, 0.0);
    out.b.assign(num_tasks, 0.0);
    for (std::size_t k = 0; k < support_size; ++k) out.a[k] = std::max(0.0, result.assignment[a_var[k]]);
    for (std::size_t t = 0; t < num_tasks; ++t) out.b[t] = std::max(0.0, result.assignment[b_var[t]]);
    out.report.objective = result.objective_value;
    out.report.rounds = round;
    out.report.num_active_constraints = rows;

    bool added = false;
    for (std::size_t t = 0; t < num_tasks; ++t) {
      const auto& p = positives[t];
      double worst = 1e-9 * (1.0 + out.b[t]);
      std::size_t worst_l = p.size();
      for (std::size_t l = 0; l < p.size(); ++l) {
        const Count* y = p.at(l);
        double lhs = 0.0;
        for (std::size_t k = 0; k < support_size; ++k) lhs += out.a[k] * static_cast<double>(y[k]);
        if (out.b[t] - lhs > worst) {
          worst = out.b[t] - lhs;
          worst_l = l;
        }
      }
      if (worst_l == p.size()) continue;
      if (std::find(active[t].begin(), active[t].end(), worst_l) != active[t].end()) continue;
      active[t].push_back(worst_l);
      added = true;
    }
    if (!added) break;
  }
  return out;
}

LearnedModel assemble(std::size_t num_capabilities, std::size_t num_agent_types, std::size_t num_tasks,
                      const SparsityPattern& sparsity, std::vector<RowSolution>& rows) {
  DenseMatrix a(num_capabilities, num_agent_types);
  DenseMatrix b(num_tasks, num_capabilities);
  LearnedModel model;
  for (std::size_t c = 0; c < num_capabilities; ++c) {
    const auto support = sparsity.support(c);
    const auto tasks = sparsity.required_tasks(c);
    for (std::size_t j = 0; j < support.size(); ++j) a(c, support[j]) = rows[c].a[j];
    for (std::size_t t = 0; t < tasks.size(); ++t) b(tasks[t], c) = rows[c].b[t];
    model.per_capability_objectives.push_back(rows[c].report.objective);
    model.statuses.push_back(rows[c].report.status);
    model.reports.push_back(rows[c].report);
  }
  model.A = CapabilityMatrix(std::move(a));
  model.b = RequirementSet(std::move(b));
  return model;
}

}  // namespace

LearnedModel learn(const TrainingSet& training, const SparsityPattern& sparsity, const LearnerConfig& config) {
  check_inputs(training, sparsity, config);
  const std::size_t num_capabilities = sparsity.num_capabilities();
  const std::size_t num_tasks = sparsity.num_tasks();
  const double weight_b = config.alpha_b / static_cast<double>(std::max<std::size_t>(1, num_tasks));

  std::vector<RowSolution> rows(num_capabilities);
  parallel_for(
      num_capabilities,
      [&](std::size_t c) {
        const auto start = Clock::now();
        const auto support = sparsity.support(c);
        std::vector<ProjectedSamples> positives;
        for (std::size_t i : sparsity.required_tasks(c)) positives.push_back(project_positives(training[i], support));
        rows[c] = support.size() == 1 ? solve_closed_form(positives, weight_b, config)
                                      : solve_row(c, positives, support.size(), weight_b, config);
        rows[c].report.solve_milliseconds =
            std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      },
      config.threads);
  return assemble(num_capabilities, sparsity.num_agent_types(), num_tasks, sparsity, rows);
}

LearnedModel learn_joint_reference(const TrainingSet& training, const SparsityPattern& sparsity,
                                   const LearnerConfig& config) {
  check_inputs(training, sparsity, config);
  const std::size_t num_capabilities = sparsity.num_capabilities();
  const std::size_t num_tasks = sparsity.num_tasks();
  const double weight_b = config.alpha_b / static_cast<double>(std::max<std::size_t>(1, num_tasks));

  lp::LinearProgram lp(lp::Sense::Maximize);
  std::vector<std::vector<std::size_t>> a_var(num_capabilities), b_var(num_capabilities);
  std::vector<std::size_t> t_var(num_capabilities);
  for (std::size_t c = 0; c < num_capabilities; ++c) {
    for (std::size_t k : sparsity.support(c)) {
      (void)k;
      a_var[c].push_back(lp.add_variable(0.0));
    }
    for (std::size_t i : sparsity.required_tasks(c)) {
      (void)i;
      b_var[c].push_back(lp.add_variable(weight_b));
    }
    t_var[c] = lp.add_variable(config.alpha_a);
  }
  for (std::size_t c = 0; c < num_capabilities; ++c) {
    const auto support = sparsity.support(c);
    const auto tasks = sparsity.required_tasks(c);
    std::vector<lp::Term> norm;
    for (std::size_t v : a_var[c]) norm.push_back({v, 1.0});
    lp.add_constraint(std::move(norm), lp::Relation::Equal, 1.0);
    for (std::size_t v : a_var[c]) lp.add_constraint({{t_var[c], 1.0}, {v, -1.0}}, lp::Relation::LessEqual, 0.0);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
      for (const auto& sample : training[tasks[t]]) {
        if (!sample.is_valid) continue;
        std::vector<lp::Term> terms;
        for (std::size_t j = 0; j < support.size(); ++j) {
          terms.push_back({a_var[c][j], static_cast<double>(sample.team[support[j]])});
        }
        terms.push_back({b_var[c][t], -1.0});
        lp.add_constraint(std::move(terms), lp::Relation::GreaterEqual, 0.0);
      }
    }
  }

  const auto start = Clock::now();
  const auto result = lp::solve_lp(lp, config.simplex);
  const double elapsed = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  if (result.status != lp::SolveStatus::Optimal) throw InfeasibleLp(num_capabilities, result.status);

  std::vector<RowSolution> rows(num_capabilities);
  for (std::size_t c = 0; c < num_capabilities; ++c) {
    auto& row = rows[c];
    double objective = config.alpha_a * result.assignment[t_var[c]];
    for (std::size_t v : a_var[c]) row.a.push_back(std::max(0.0, result.assignment[v]));
    for (std::size_t v : b_var[c]) {
      row.b.push_back(std::max(0.0, result.assignment[v]));
      objective += weight_b * result.assignment[v];
    }
    row.report.objective = objective;
    row.report.solve_milliseconds = elapsed;
    row.report.num_variables = lp.num_variables();
    row.report.num_active_constraints = lp.num_constraints();
    row.report.rounds = 1;
  }
  return assemble(num_capabilities, sparsity.num_agent_types(), num_tasks, sparsity, rows);
}

}  // namespace capalloc
