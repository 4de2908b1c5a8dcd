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


// Team formation, routing and scheduling as one mixed-integer program on the
// complete task graph. Nodes 0..M-1 are tasks, node M is the start depot s
// and node M+1 the terminal u. Agents of type k leave s, visit tasks and stop
// at u; the agents arriving at task i form its team y_i, which must satisfy
// the learned requirement A * y_i >= b_i.

#ifndef CAPALLOC_ALLOCATOR_HPP_
#define CAPALLOC_ALLOCATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capalloc/lp.hpp"
#include "capalloc/model.hpp"

namespace capalloc {

struct Edge {
  std::size_t from;
  std::size_t to;

  bool operator==(const Edge&) const = default;
};

struct AllocationInstance {
  std::size_t num_tasks = 0;
  CapabilityMatrix capabilities;
  RequirementSet requirements;
  /// [k] is a (M+2) x (M+2) matrix of travel times T_kij in seconds.
  std::vector<DenseMatrix> travel_time;
  /// K x M; T_ki, the work time of one type-k agent at task i.
  DenseMatrix task_time;
  /// [k] is a (M+2) x (M+2) matrix of energy costs d_kij.
  std::vector<DenseMatrix> travel_energy;
  std::vector<double> energy_limit;
  std::vector<Count> fleet;
  double energy_weight = 1.0;
  double time_weight = 1.0;
  /// Big-M of the scheduling rows; the default dominates every schedule.
  std::optional<double> big_m;
  /// Optional bound on sum_k y_ki for every task.
  std::optional<Count> team_size_cap;

  std::size_t num_agent_types() const { return fleet.size(); }
  std::size_t num_nodes() const { return num_tasks + 2; }
  std::size_t start_node() const { return num_tasks; }
  std::size_t terminal_node() const { return num_tasks + 1; }
  bool is_task(std::size_t node) const { return node < num_tasks; }

  /// Work time at any node; zero at s and u.
  double work_time(std::size_t k, std::size_t node) const;
  /// Sum of every travel and task time plus one.
  double default_big_m() const;
  double effective_big_m() const { return big_m ? *big_m : default_big_m(); }

  /// Every ordered pair except self-loops, edges into s and edges out of u,
  /// in row-major order.
  std::vector<Edge> edges() const;

  /// Throws ContractError on inconsistent shapes or negative costs.
  void validate() const;
};

/// Variable layout of the program produced by build_milp.
class AllocationLayout {
 public:
  AllocationLayout() = default;
  explicit AllocationLayout(const AllocationInstance& instance);

  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t flow(std::size_t k, std::size_t e) const { return k * edges_.size() + e; }
  std::size_t used(std::size_t k, std::size_t e) const { return used_offset_ + k * edges_.size() + e; }
  std::size_t team(std::size_t k, std::size_t task) const { return team_offset_ + k * num_tasks_ + task; }
  std::size_t time(std::size_t node) const { return time_offset_ + node; }
  std::size_t num_variables() const { return time_offset_ + num_tasks_ + 2; }
  std::vector<std::size_t> flow_variables() const;
  std::vector<std::size_t> used_variables() const;

 private:
  std::vector<Edge> edges_;
  std::size_t num_types_ = 0;
  std::size_t num_tasks_ = 0;
  std::size_t used_offset_ = 0;
  std::size_t team_offset_ = 0;
  std::size_t time_offset_ = 0;
};

struct MilpOptions {
  /// Declare the flows x integral as well as the indicators r.
  bool strict_integer = false;
  /// Add y_ki <= sum_{j in M} x_ksj for every agent type whose task-to-task edges
  /// all take positive time. Such a type cannot circulate, so each of its agents
  /// visits a task at most once and the rows cut no integral plan; they
  /// remove the depot-free cycles that dominate the LP relaxation.
  bool visit_bounds = false;
};

/// Edge indicators r are binary; flows x and teams y are continuous unless
/// options.strict_integer is set.
lp::MixedIntegerProgram build_milp(const AllocationInstance& instance, const MilpOptions& options = {});

/// True when every edge of agent type k between two tasks takes positive
/// time, counting the work at its tail. Only such edges can form cycles.
bool acyclic_type(const AllocationInstance& instance, std::size_t k);

enum class IntegralityMode {
  /// x and y continuous; a fractional flow is reported as an error.
  Continuous,
  /// x declared integral from the start.
  Strict,
  /// Continuous first, re-solved with integral x if any flow is fractional.
  Automatic,
};

struct AllocationOptions {
  IntegralityMode integrality = IntegralityMode::Automatic;
  bool visit_bounds = true;
  lp::BranchAndBoundOptions branch_and_bound;
};

template <typename T>
using EdgeTensor = std::vector<std::vector<std::vector<T>>>;

/// One group of identical routes of a single agent type.
struct Route {
  std::size_t agent_type = 0;
  /// Node sequence starting at s and ending at u.
  std::vector<std::size_t> nodes;
  Count agents = 0;
};

struct AllocationPlan {
  /// [k][i][j] = x_kij.
  EdgeTensor<Count> flows;
  /// [k][i][j] = r_kij.
  EdgeTensor<std::uint8_t> edge_used;
  /// [i] = y_i, the team sent to task i.
  std::vector<TeamConfiguration> teams;
  /// Earliest feasible start time of every node; start_times[s] = 0.
  std::vector<double> start_times;
  double mission_time = 0.0;
  double objective_value = 0.0;

  lp::SolveStatus status = lp::SolveStatus::Optimal;
  bool proven_optimal = true;
  bool strict_integer = false;
  std::size_t nodes_explored = 0;

  std::vector<Route> routes(const AllocationInstance& instance) const;
};

/// Raised by solve_allocation when the program has no feasible plan or the
/// node cap is hit without any incumbent.
class AllocationFailed : public DomainError {
 public:
  explicit AllocationFailed(lp::SolveStatus status, const std::string& detail = {});
  lp::SolveStatus status;
};

/// On IterationLimit with an incumbent, the plan is returned with
/// proven_optimal = false.
AllocationPlan solve_allocation(const AllocationInstance& instance, const AllocationOptions& options = {});

/// Builds plan fields from integral flows: teams, indicators, the earliest
/// schedule and the objective. Returns nullopt when the flows admit no
/// schedule.
std::optional<AllocationPlan> plan_from_flows(const AllocationInstance& instance, EdgeTensor<Count> flows);

enum class ConstraintFamily {
  Requirement,
  Schedule,
  Energy,
  FlowConservation,
  Fleet,
  TeamFlow,
  EdgeCoupling,
  TeamSize,
  Domain,
};

const char* to_string(ConstraintFamily family);

struct Violation {
  ConstraintFamily family;
  /// Family-specific indices, 0-based: (k, i, j) for edge rows, (k) for
  /// energy and fleet, (k, i) for node rows, (i, c) for requirements.
  std::vector<std::size_t> indices;
  /// Amount by which the row is violated (> 0).
  double slack = 0.0;
  std::string message;
};

std::vector<Violation> validate_plan(const AllocationInstance& instance, const AllocationPlan& plan,
                                     double tolerance = 1e-6);

}  // namespace capalloc

#endif  // CAPALLOC_ALLOCATOR_HPP_
