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

#include <algorithm>
#include <cmath>
#include <random>

#include "capalloc/learner.hpp"
#include "doctest.h"
#include "learner_oracle.hpp"

using namespace capalloc;

namespace {

TrainingSample positive(std::vector<Count> y) { return {TeamConfiguration(std::move(y)), 1.0, true}; }
TrainingSample negative(std::vector<Count> y) { return {TeamConfiguration(std::move(y)), 0.0, false}; }

}  // namespace

TEST_CASE("learn: symmetric two-sample example") {
  const TrainingSet training = {{positive({2, 0}), positive({0, 2}), negative({1, 0})}};
  const auto sparsity = SparsityPattern::all_positive(1, 2, 1);
  const auto model = learn(training, sparsity);
  CHECK(model.A(0, 0) == doctest::Approx(0.5));
  CHECK(model.A(0, 1) == doctest::Approx(0.5));
  CHECK(model.b(0, 0) == doctest::Approx(1.0));
  // alpha_b * b / |M| + alpha_a * min(a) = 1 + 0.25 * 0.5
  CHECK(model.per_capability_objectives[0] == doctest::Approx(1.125));
  // (1,1) then classifies valid: 0.5 + 0.5 >= 1.
  CHECK(classify(TeamConfiguration{1, 1}, model.A, model.b.task(0)));
  CHECK_FALSE(classify(TeamConfiguration{1, 0}, model.A, model.b.task(0)));

  const auto joint = learn_joint_reference(training, sparsity);
  CHECK(joint.A(0, 0) == doctest::Approx(0.5));
  CHECK(joint.A(0, 1) == doctest::Approx(0.5));
  CHECK(joint.b(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("learn: single positive sample prefers the objective over the min term") {
  // Oracle: line search over a2 in [0, 1] of alpha_b (1 - a2) + alpha_a min(1 - a2, a2).
  const double alpha_b = 1.0, alpha_a = 0.25;
  double best_a2 = -1.0, best_value = -1.0;
  for (int step = 0; step <= 10000; ++step) {
    const double a2 = step / 10000.0;
    const double value = alpha_b * (1.0 - a2) + alpha_a * std::min(1.0 - a2, a2);
    if (value > best_value) {
      best_value = value;
      best_a2 = a2;
    }
  }
  REQUIRE(best_a2 == 0.0);

  const TrainingSet training = {{positive({1, 0})}};
  const auto model = learn(training, SparsityPattern::all_positive(1, 2, 1));
  CHECK(model.A(0, 0) == doctest::Approx(1.0 - best_a2));
  CHECK(model.A(0, 1) == doctest::Approx(best_a2));
  CHECK(model.b(0, 0) == doctest::Approx(1.0));
  CHECK(model.per_capability_objectives[0] == doctest::Approx(best_value));
}

TEST_CASE("learn: single-entry support uses the closed form") {
  const TrainingSet training = {{positive({3, 1}), positive({5, 0}), negative({1, 9})},
                                {positive({2, 2}), positive({4, 0})}};
  const auto sparsity = SparsityPattern({{true, false}}, {{true, true}});
  const auto model = learn(training, sparsity);
  CHECK(model.reports[0].closed_form);
  CHECK(model.A(0, 0) == 1.0);
  CHECK(model.A(0, 1) == 0.0);
  CHECK(model.b(0, 0) == 3.0);
  CHECK(model.b(1, 0) == 2.0);
  const auto joint = learn_joint_reference(training, sparsity);
  CHECK(joint.b(0, 0) == doctest::Approx(3.0));
  CHECK(joint.b(1, 0) == doctest::Approx(2.0));
  CHECK(model.total_objective() == doctest::Approx(joint.total_objective()));
}

TEST_CASE("learn: errors") {
  const auto sparsity = SparsityPattern::all_positive(1, 2, 2);
  const TrainingSet no_pos = {{positive({1, 1})}, {negative({1, 1})}};
  try {
    learn(no_pos, sparsity);
    FAIL("expected NoPositiveSamples");
  } catch (const NoPositiveSamples& e) {
    CHECK(e.task == 1);
    CHECK(e.capability == 0);
  }
  // A task whose requirements are all known to be zero needs no positives.
  const auto relaxed = SparsityPattern({{true, true}}, {{true, false}});
  CHECK_NOTHROW(learn(no_pos, relaxed));

  CHECK_THROWS_AS(learn({{positive({1, 1})}}, sparsity), ContractError);
  CHECK_THROWS_AS(learn({{positive({1, 1, 1})}, {positive({1, 1})}}, sparsity), ContractError);
  LearnerConfig bad;
  bad.alpha_b = 0.0;
  CHECK_THROWS_AS(learn(no_pos, relaxed, bad), ContractError);
  bad = {};
  bad.alpha_a = -1.0;
  CHECK_THROWS_AS(learn(no_pos, relaxed, bad), ContractError);
}

TEST_CASE("learn: duplicates and negatives do not change the answer") {
  const TrainingSet base = {{positive({2, 1, 0}), positive({0, 1, 3}), positive({1, 1, 1})}};
  TrainingSet noisy = base;
  noisy[0].push_back(positive({2, 1, 0}));
  noisy[0].push_back(positive({0, 1, 3}));
  noisy[0].push_back(negative({0, 0, 0}));
  noisy[0].push_back(negative({9, 9, 9}));
  const auto sparsity = SparsityPattern::all_positive(1, 3, 1);
  const auto m1 = learn(base, sparsity);
  const auto m2 = learn(noisy, sparsity);
  CHECK(m1.A.values() == m2.A.values());
  CHECK(m1.b.values() == m2.b.values());
}

TEST_CASE("learn: invariants L1-L5 on randomized small instances") {
  std::mt19937_64 rng(314159);
  for (int trial = 0; trial < 100; ++trial) {
    CAPTURE(trial);
    const auto inst = learner_oracle::random_instance(rng);
    for (double alpha_a : {0.0, 0.25}) {
      LearnerConfig config;
      config.alpha_a = alpha_a;
      const auto failures = learner_oracle::invariant_failures(inst, learn(inst.training, inst.sparsity, config), config);
      CHECK(failures.empty());
      for (const auto& f : failures) MESSAGE(f);
    }
  }
}

TEST_CASE("learn: more positives never raise the optimum") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = learner_oracle::random_instance(rng);
    LearnerConfig config;
    config.alpha_a = 0.0;
    TrainingSet subset = inst.training;
    for (auto& task : subset) {
      // Keep the guaranteed positive (second to last) and half of the rest.
      std::vector<TrainingSample> kept;
      for (std::size_t l = 0; l < task.size(); ++l) {
        if (l % 2 == 0 || l + 2 == task.size()) kept.push_back(task[l]);
      }
      task = kept;
    }
    const auto small = learn(subset, inst.sparsity, config);
    const auto large = learn(inst.training, inst.sparsity, config);
    for (std::size_t c = 0; c < inst.sparsity.num_capabilities(); ++c) {
      CHECK(large.per_capability_objectives[c] <= small.per_capability_objectives[c] + 1e-9);
      // Per-entry monotonicity only holds when the row has one required task.
      const auto tasks = inst.sparsity.required_tasks(c);
      if (tasks.size() == 1) CHECK(large.b(tasks[0], c) <= small.b(tasks[0], c) + 1e-9);
    }
  }
}

TEST_CASE("learn: deterministic and thread-count independent") {
  std::mt19937_64 rng(5);
  const auto inst = learner_oracle::random_instance(rng);
  LearnerConfig one, four;
  one.threads = 1;
  four.threads = 4;
  const auto a = learn(inst.training, inst.sparsity, one);
  const auto b = learn(inst.training, inst.sparsity, four);
  CHECK(a.A.values() == b.A.values());
  CHECK(a.b.values() == b.b.values());
}
