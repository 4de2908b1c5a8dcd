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


// Shared instances for the unit and acceptance suites.

#ifndef CAPALLOC_TESTS_FIXTURES_HPP_
#define CAPALLOC_TESTS_FIXTURES_HPP_

#include <array>
#include <cmath>
#include <vector>

#include "capalloc/allocator.hpp"
#include "capalloc/learner.hpp"
#include "capalloc/model.hpp"

namespace capalloc::fixtures {

// Five robot types (two small, three large) and five capabilities:
// perception, light picking, heavy picking, and perception / light picking
// for the find-and-pick task.
inline CapabilityMatrix robot_capabilities() {
  return CapabilityMatrix(DenseMatrix::from_rows({
      {1, 2, 1, 1, 2},
      {0, 0, 0, 2, 1},
      {0, 0, 0, 0, 1},
      {1, 1, 1, 1, 1},
      {0, 0, 0, 1, 1},
  }));
}

// Explore, pick light, pick mixed, pick heavy, find and pick.
inline RequirementSet robot_requirements() {
  return RequirementSet(DenseMatrix::from_rows({
      {2, 0, 0, 0, 0},
      {0, 4, 0, 0, 0},
      {0, 3, 1, 0, 0},
      {0, 0, 3, 0, 0},
      {0, 0, 0, 2, 1},
  }));
}

inline SparsityPattern robot_sparsity() {
  const auto A = robot_capabilities();
  const auto b = robot_requirements();
  std::vector<std::vector<bool>> a1(5, std::vector<bool>(5));
  std::vector<std::vector<bool>> b1(5, std::vector<bool>(5));
  for (std::size_t c = 0; c < 5; ++c) {
    for (std::size_t k = 0; k < 5; ++k) a1[c][k] = A(c, k) > 0.0;
    for (std::size_t i = 0; i < 5; ++i) b1[c][i] = b(i, c) > 0.0;
  }
  return SparsityPattern(a1, b1);
}

// Every team of one to four robots, labeled against the reference model.
inline TrainingSet robot_training_set() {
  const auto A = robot_capabilities();
  const auto b = robot_requirements();
  TrainingSet training(5);
  for (Count y1 = 0; y1 <= 4; ++y1) {
    for (Count y2 = 0; y1 + y2 <= 4; ++y2) {
      for (Count y3 = 0; y1 + y2 + y3 <= 4; ++y3) {
        for (Count y4 = 0; y1 + y2 + y3 + y4 <= 4; ++y4) {
          for (Count y5 = 0; y1 + y2 + y3 + y4 + y5 <= 4; ++y5) {
            const TeamConfiguration team{y1, y2, y3, y4, y5};
            if (team.total() == 0) continue;
            for (std::size_t i = 0; i < 5; ++i) {
              const bool valid = classify(team, A, b.task(i), 0.0);
              training[i].push_back({team, valid ? 1.0 : 0.0, valid});
            }
          }
        }
      }
    }
  }
  return training;
}

// Five tasks in a 30 m square with the depot at the origin; travel times and
// energies follow straight-line distances.
inline AllocationInstance robot_instance(const CapabilityMatrix& A, const RequirementSet& b) {
  const std::array<std::array<double, 2>, 7> where{{
      {6, 24}, {24, 26}, {15, 12}, {27, 6}, {9, 15}, {0, 0}, {0, 0},
  }};
  const std::array<double, 5> speed{1.0, 1.2, 0.6, 0.6, 0.5};
  const std::array<double, 5> energy_per_meter{1.0, 1.0, 2.0, 2.0, 2.5};
  const std::array<double, 5> work{40, 35, 50, 45, 60};

  AllocationInstance instance;
  instance.num_tasks = 5;
  instance.capabilities = A;
  instance.requirements = b;
  instance.fleet = {4, 4, 4, 4, 4};
  instance.energy_limit = {400, 400, 600, 600, 800};
  instance.energy_weight = 1.0;
  instance.time_weight = 1.0;
  instance.team_size_cap = 4;
  instance.task_time = DenseMatrix(5, 5);
  for (std::size_t k = 0; k < 5; ++k) {
    DenseMatrix time(7, 7);
    DenseMatrix energy(7, 7);
    for (std::size_t i = 0; i < 7; ++i) {
      for (std::size_t j = 0; j < 7; ++j) {
        const double dist = std::hypot(where[i][0] - where[j][0], where[i][1] - where[j][1]);
        time(i, j) = dist / speed[k];
        energy(i, j) = dist * energy_per_meter[k];
      }
    }
    instance.travel_time.push_back(time);
    instance.travel_energy.push_back(energy);
    for (std::size_t i = 0; i < 5; ++i) instance.task_time(k, i) = work[i];
  }
  return instance;
}

}  // namespace capalloc::fixtures

#endif  // CAPALLOC_TESTS_FIXTURES_HPP_
