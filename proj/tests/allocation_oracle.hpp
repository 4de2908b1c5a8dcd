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


// Exhaustive reference for tiny allocation instances: enumerates every
// integral flow per agent type and keeps the cheapest combination that
// admits a schedule.

#ifndef CAPALLOC_TESTS_ALLOCATION_ORACLE_HPP_
#define CAPALLOC_TESTS_ALLOCATION_ORACLE_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "capalloc/allocator.hpp"

namespace capalloc::oracle {

using Flow = std::vector<std::vector<Count>>;  // [i][j] for one type

struct OracleResult {
  bool feasible = false;
  double objective = std::numeric_limits<double>::infinity();
  std::size_t candidates = 0;
};

inline bool permitted(std::size_t i, std::size_t j, std::size_t s, std::size_t u) {
  return i != j && j != s && i != u;
}

// Every flow of one type meeting conservation, fleet and energy limits.
inline std::vector<Flow> flows_of_type(const AllocationInstance& inst, std::size_t k) {
  const std::size_t n = inst.num_nodes();
  const std::size_t s = inst.num_tasks;
  const std::size_t u = inst.num_tasks + 1;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (permitted(i, j, s, u)) arcs.emplace_back(i, j);
    }
  }
  std::vector<Flow> out;
  std::vector<Count> value(arcs.size(), 0);
  const Count cap = inst.fleet[k];
  for (;;) {
    Flow f(n, std::vector<Count>(n, 0));
    for (std::size_t a = 0; a < arcs.size(); ++a) f[arcs[a].first][arcs[a].second] = value[a];
    bool ok = true;
    long dispatched = 0;
    for (std::size_t j = 0; j < n; ++j) dispatched += f[s][j];
    ok = dispatched <= static_cast<long>(cap);
    for (std::size_t t = 0; ok && t < inst.num_tasks; ++t) {
      long in = 0, outflow = 0;
      for (std::size_t i = 0; i < n; ++i) {
        in += f[i][t];
        outflow += f[t][i];
      }
      ok = in == outflow;
    }
    double energy = 0.0;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      energy += inst.travel_energy[k](arcs[a].first, arcs[a].second) * value[a];
    }
    if (ok && energy <= inst.energy_limit[k] + 1e-9) out.push_back(std::move(f));

    std::size_t pos = 0;
    while (pos < value.size() && value[pos] == cap) value[pos++] = 0;
    if (pos == value.size()) break;
    ++value[pos];
  }
  return out;
}

// Smallest terminal time of the schedule rows with the given edge usage, or
// nullopt when no schedule exists.
inline std::optional<double> earliest_finish(const AllocationInstance& inst, const std::vector<Flow>& flows) {
  const std::size_t n = inst.num_nodes();
  const std::size_t s = inst.num_tasks;
  const std::size_t u = inst.num_tasks + 1;
  const double big_m = inst.effective_big_m();
  std::vector<double> t(n, 0.0);
  for (std::size_t round = 0; round <= n + 1; ++round) {
    bool moved = false;
    for (std::size_t k = 0; k < flows.size(); ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          if (!permitted(i, j, s, u)) continue;
          const double work = i < inst.num_tasks ? inst.task_time(k, i) : 0.0;
          const double used = flows[k][i][j] > 0 ? 1.0 : 0.0;
          // t_i - t_j + M r <= M - T - work
          const double need = t[i] + big_m * used - big_m + inst.travel_time[k](i, j) + work;
          if (need > t[j] + 1e-9) {
            t[j] = need;
            moved = true;
          }
        }
      }
    }
    if (!moved) return t[s] > 0.0 ? std::nullopt : std::optional<double>(t[u]);
  }
  return std::nullopt;
}

inline OracleResult solve_by_enumeration(const AllocationInstance& inst) {
  const std::size_t num_types = inst.num_agent_types();
  std::vector<std::vector<Flow>> options;
  for (std::size_t k = 0; k < num_types; ++k) options.push_back(flows_of_type(inst, k));
  OracleResult best;
  std::vector<std::size_t> pick(num_types, 0);
  for (const auto& o : options) {
    if (o.empty()) return best;
  }
  for (;;) {
    ++best.candidates;
    std::vector<Flow> flows;
    for (std::size_t k = 0; k < num_types; ++k) flows.push_back(options[k][pick[k]]);

    bool ok = true;
    for (std::size_t task = 0; ok && task < inst.num_tasks; ++task) {
      std::vector<double> y(num_types, 0.0);
      double size = 0.0;
      for (std::size_t k = 0; k < num_types; ++k) {
        for (std::size_t i = 0; i < inst.num_nodes(); ++i) y[k] += flows[k][i][task];
        size += y[k];
      }
      if (inst.team_size_cap && size > *inst.team_size_cap) ok = false;
      for (std::size_t c = 0; ok && c < inst.capabilities.num_capabilities(); ++c) {
        double have = 0.0;
        for (std::size_t k = 0; k < num_types; ++k) have += inst.capabilities(c, k) * y[k];
        if (have < inst.requirements(task, c) - 1e-9) ok = false;
      }
    }
    if (ok) {
      if (auto finish = earliest_finish(inst, flows)) {
        double energy = 0.0;
        for (std::size_t k = 0; k < num_types; ++k) {
          for (std::size_t i = 0; i < inst.num_nodes(); ++i) {
            for (std::size_t j = 0; j < inst.num_nodes(); ++j) energy += inst.travel_energy[k](i, j) * flows[k][i][j];
          }
        }
        const double value = inst.energy_weight * energy + inst.time_weight * *finish;
        best.feasible = true;
        if (value < best.objective) best.objective = value;
      }
    }

    std::size_t pos = 0;
    while (pos < num_types && pick[pos] + 1 == options[pos].size()) pick[pos++] = 0;
    if (pos == num_types) break;
    ++pick[pos];
  }
  return best;
}

// Tiny random instance: |M| <= 2, |K| <= 2, n_k <= 2, small integer costs.
inline AllocationInstance random_instance(std::mt19937_64& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  AllocationInstance inst;
  inst.num_tasks = static_cast<std::size_t>(pick(1, 2));
  const std::size_t num_types = static_cast<std::size_t>(pick(1, 2));
  const std::size_t num_caps = static_cast<std::size_t>(pick(1, 2));
  const std::size_t n = inst.num_tasks + 2;
  DenseMatrix A(num_caps, num_types);
  for (std::size_t c = 0; c < num_caps; ++c) {
    for (std::size_t k = 0; k < num_types; ++k) A(c, k) = 0.5 * pick(0, 3);
  }
  DenseMatrix b(inst.num_tasks, num_caps);
  for (std::size_t i = 0; i < inst.num_tasks; ++i) {
    for (std::size_t c = 0; c < num_caps; ++c) b(i, c) = pick(0, 1) ? 0.25 * pick(1, 10) : 0.0;
  }
  inst.capabilities = CapabilityMatrix(A);
  inst.requirements = RequirementSet(b);
  inst.task_time = DenseMatrix(num_types, inst.num_tasks);
  for (std::size_t k = 0; k < num_types; ++k) {
    inst.fleet.push_back(static_cast<Count>(pick(0, 2)));
    DenseMatrix time(n, n), energy(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        time(i, j) = pick(1, 9);
        energy(i, j) = pick(1, 6);
      }
    }
    inst.travel_time.push_back(time);
    inst.travel_energy.push_back(energy);
    for (std::size_t i = 0; i < inst.num_tasks; ++i) inst.task_time(k, i) = pick(0, 4);
    inst.energy_limit.push_back(pick(0, 3) == 0 ? std::numeric_limits<double>::infinity() : pick(4, 30));
  }
  inst.energy_weight = 0.5 * pick(0, 4);
  inst.time_weight = 0.5 * pick(0, 4);
  if (pick(0, 2) == 0) inst.team_size_cap = static_cast<Count>(pick(1, 3));
  return inst;
}

}  // namespace capalloc::oracle

#endif  // CAPALLOC_TESTS_ALLOCATION_ORACLE_HPP_
