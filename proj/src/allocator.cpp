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


#include "capalloc/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace capalloc {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw ContractError(message);
}

bool nonnegative_finite(double v) { return std::isfinite(v) && v >= 0.0; }

void check_square(const std::vector<DenseMatrix>& matrices, std::size_t num_types, std::size_t num_nodes,
                  const char* what) {
  require(matrices.size() == num_types, std::string(what) + " needs one matrix per agent type");
  for (const auto& m : matrices) {
    require(m.rows() == num_nodes && m.cols() == num_nodes,
            std::string(what) + " matrices must be " + std::to_string(num_nodes) + " x " +
                std::to_string(num_nodes));
    for (std::size_t i = 0; i < num_nodes; ++i) {
      for (std::size_t j = 0; j < num_nodes; ++j) {
        require(nonnegative_finite(m(i, j)), std::string(what) + " entries must be finite and nonnegative");
      }
    }
  }
}

std::string node_label(const AllocationInstance& instance, std::size_t node) {
  if (node == instance.start_node()) return "s";
  if (node == instance.terminal_node()) return "u";
  return std::to_string(node + 1);
}

std::string edge_suffix(const AllocationInstance& instance, std::size_t k, const Edge& e) {
  return std::to_string(k + 1) + "_" + node_label(instance, e.from) + "_" + node_label(instance, e.to);
}

bool edge_allowed(const AllocationInstance& instance, std::size_t i, std::size_t j) {
  return i != j && j != instance.start_node() && i != instance.terminal_node();
}

}  // namespace

double AllocationInstance::work_time(std::size_t k, std::size_t node) const {
  return is_task(node) ? task_time(k, node) : 0.0;
}

double AllocationInstance::default_big_m() const {
  double total = 1.0;
  for (std::size_t k = 0; k < num_agent_types(); ++k) {
    for (const auto& e : edges()) total += travel_time[k](e.from, e.to);
    for (std::size_t i = 0; i < num_tasks; ++i) total += task_time(k, i);
  }
  return total;
}

std::vector<Edge> AllocationInstance::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < num_nodes(); ++i) {
    for (std::size_t j = 0; j < num_nodes(); ++j) {
      if (edge_allowed(*this, i, j)) out.push_back({i, j});
    }
  }
  return out;
}

void AllocationInstance::validate() const {
  const std::size_t num_types = num_agent_types();
  require(num_tasks > 0, "an allocation instance needs at least one task");
  require(num_types > 0, "an allocation instance needs at least one agent type");
  require(capabilities.num_agent_types() == num_types, "capability matrix has " +
                                                           std::to_string(capabilities.num_agent_types()) +
                                                           " agent types, fleet has " + std::to_string(num_types));
  require(requirements.num_tasks() == num_tasks, "requirement set has " +
                                                     std::to_string(requirements.num_tasks()) + " tasks, instance has " +
                                                     std::to_string(num_tasks));
  require(requirements.num_capabilities() == capabilities.num_capabilities(),
          "requirements and capabilities disagree on the number of capabilities");
  check_square(travel_time, num_types, num_nodes(), "travel time");
  check_square(travel_energy, num_types, num_nodes(), "travel energy");
  require(task_time.rows() == num_types && task_time.cols() == num_tasks, "task time must be K x M");
  for (std::size_t k = 0; k < num_types; ++k) {
    for (std::size_t i = 0; i < num_tasks; ++i) {
      require(nonnegative_finite(task_time(k, i)), "task times must be finite and nonnegative");
    }
  }
  require(energy_limit.size() == num_types, "energy limits need one entry per agent type");
  for (double d : energy_limit) require(d >= 0.0, "energy limits must be nonnegative");
  require(nonnegative_finite(energy_weight) && nonnegative_finite(time_weight), "weights must be nonnegative");
  if (big_m) require(std::isfinite(*big_m) && *big_m > 0.0, "big-M must be positive");
}

AllocationLayout::AllocationLayout(const AllocationInstance& instance)
    : edges_(instance.edges()), num_types_(instance.num_agent_types()), num_tasks_(instance.num_tasks) {
  used_offset_ = num_types_ * edges_.size();
  team_offset_ = 2 * used_offset_;
  time_offset_ = team_offset_ + num_types_ * num_tasks_;
}

std::vector<std::size_t> AllocationLayout::flow_variables() const {
  std::vector<std::size_t> out(num_types_ * edges_.size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = v;
  return out;
}

std::vector<std::size_t> AllocationLayout::used_variables() const {
  std::vector<std::size_t> out(num_types_ * edges_.size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = used_offset_ + v;
  return out;
}

bool acyclic_type(const AllocationInstance& instance, std::size_t k) {
  for (std::size_t i = 0; i < instance.num_tasks; ++i) {
    for (std::size_t j = 0; j < instance.num_tasks; ++j) {
      if (i != j && !(instance.travel_time[k](i, j) + instance.task_time(k, i) > 0.0)) return false;
    }
  }
  return true;
}

lp::MixedIntegerProgram build_milp(const AllocationInstance& instance, const MilpOptions& options) {
  using lp::Relation;
  using lp::Term;
  instance.validate();
  const AllocationLayout layout(instance);
  const auto& edges = layout.edges();
  const std::size_t num_types = instance.num_agent_types();
  const std::size_t num_tasks = instance.num_tasks;
  const std::size_t s = instance.start_node();
  const std::size_t u = instance.terminal_node();
  const double big_m = instance.effective_big_m();

  lp::MixedIntegerProgram mip;
  auto& prog = mip.base;
  prog.set_sense(lp::Sense::Minimize);

  for (std::size_t k = 0; k < num_types; ++k) {
    const double n = instance.fleet[k];
    for (const auto& e : edges) {
      prog.add_variable(instance.energy_weight * instance.travel_energy[k](e.from, e.to), 0.0, n,
                        "x_" + edge_suffix(instance, k, e));
    }
  }
  for (std::size_t k = 0; k < num_types; ++k) {
    for (const auto& e : edges) prog.add_variable(0.0, 0.0, 1.0, "r_" + edge_suffix(instance, k, e));
  }
  for (std::size_t k = 0; k < num_types; ++k) {
    for (std::size_t i = 0; i < num_tasks; ++i) {
      prog.add_variable(0.0, 0.0, lp::kInfinity, "y_" + std::to_string(k + 1) + "_" + std::to_string(i + 1));
    }
  }
  for (std::size_t node = 0; node < instance.num_nodes(); ++node) {
    const double cost = node == u ? instance.time_weight : 0.0;
    const double upper = node == s ? 0.0 : lp::kInfinity;
    prog.add_variable(cost, 0.0, upper, "t_" + node_label(instance, node));
  }

  // Learned requirements on every team.
  for (std::size_t i = 0; i < num_tasks; ++i) {
    for (std::size_t c = 0; c < instance.capabilities.num_capabilities(); ++c) {
      const double b = instance.requirements(i, c);
      if (b <= 0.0) continue;
      std::vector<Term> terms;
      for (std::size_t k = 0; k < num_types; ++k) {
        const double a = instance.capabilities(c, k);
        if (a > 0.0) terms.push_back({layout.team(k, i), a});
      }
      prog.add_constraint(std::move(terms), Relation::GreaterEqual, b,
                          "req_" + std::to_string(i + 1) + "_" + std::to_string(c + 1));
    }
  }

  // Scheduling: an agent using (i, j) leaves i after its work there.
  for (std::size_t k = 0; k < num_types; ++k) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [i, j] = edges[e];
      const double rhs = big_m - instance.travel_time[k](i, j) - instance.work_time(k, i);
      prog.add_constraint({{layout.time(i), 1.0}, {layout.time(j), -1.0}, {layout.used(k, e), big_m}},
                          Relation::LessEqual, rhs, "time_" + edge_suffix(instance, k, edges[e]));
    }
  }

  for (std::size_t k = 0; k < num_types; ++k) {
    if (!std::isfinite(instance.energy_limit[k])) continue;
    std::vector<Term> terms;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const double d = instance.travel_energy[k](edges[e].from, edges[e].to);
      if (d != 0.0) terms.push_back({layout.flow(k, e), d});
    }
    prog.add_constraint(std::move(terms), Relation::LessEqual, instance.energy_limit[k],
                        "energy_" + std::to_string(k + 1));
  }

  for (std::size_t k = 0; k < num_types; ++k) {
    std::vector<Term> fleet;
    std::vector<std::vector<Term>> balance(num_tasks);
    std::vector<std::vector<Term>> team(num_tasks);
    for (std::size_t i = 0; i < num_tasks; ++i) team[i].push_back({layout.team(k, i), 1.0});
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const auto [i, j] = edges[e];
      const std::size_t x = layout.flow(k, e);
      if (i == s) fleet.push_back({x, 1.0});
      if (instance.is_task(j)) {
        balance[j].push_back({x, 1.0});
        team[j].push_back({x, -1.0});
      }
      if (instance.is_task(i)) balance[i].push_back({x, -1.0});
    }
    const std::string kk = std::to_string(k + 1);
    for (std::size_t i = 0; i < num_tasks; ++i) {
      const std::string ii = std::to_string(i + 1);
      prog.add_constraint(std::move(balance[i]), Relation::Equal, 0.0, "flow_" + kk + "_" + ii);
      prog.add_constraint(std::move(team[i]), Relation::Equal, 0.0, "team_" + kk + "_" + ii);
    }
    prog.add_constraint(std::move(fleet), Relation::LessEqual, instance.fleet[k], "fleet_" + kk);
  }

  for (std::size_t k = 0; k < num_types; ++k) {
    const double n = instance.fleet[k];
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const std::string suffix = edge_suffix(instance, k, edges[e]);
      prog.add_constraint({{layout.flow(k, e), 1.0}, {layout.used(k, e), -1.0}}, Relation::GreaterEqual, 0.0,
                          "use_lo_" + suffix);
      prog.add_constraint({{layout.flow(k, e), 1.0}, {layout.used(k, e), -n}}, Relation::LessEqual, 0.0,
                          "use_hi_" + suffix);
    }
  }

  if (instance.team_size_cap) {
    for (std::size_t i = 0; i < num_tasks; ++i) {
      std::vector<Term> terms;
      for (std::size_t k = 0; k < num_types; ++k) terms.push_back({layout.team(k, i), 1.0});
      prog.add_constraint(std::move(terms), Relation::LessEqual, *instance.team_size_cap,
                          "team_size_" + std::to_string(i + 1));
    }
  }

  if (options.visit_bounds) {
    for (std::size_t k = 0; k < num_types; ++k) {
      if (!acyclic_type(instance, k)) continue;
      std::vector<Term> dispatch;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].from == s && instance.is_task(edges[e].to)) dispatch.push_back({layout.flow(k, e), -1.0});
      }
      for (std::size_t i = 0; i < num_tasks; ++i) {
        auto terms = dispatch;
        terms.push_back({layout.team(k, i), 1.0});
        prog.add_constraint(std::move(terms), Relation::LessEqual, 0.0,
                            "visits_" + std::to_string(k + 1) + "_" + std::to_string(i + 1));
      }
    }
  }

  mip.integral = layout.used_variables();
  if (options.strict_integer) {
    auto flows = layout.flow_variables();
    mip.integral.insert(mip.integral.begin(), flows.begin(), flows.end());
  }
  return mip;
}

AllocationFailed::AllocationFailed(lp::SolveStatus solve_status, const std::string& detail)
    : DomainError(std::string("allocation ") +
                  (solve_status == lp::SolveStatus::Infeasible ? "is infeasible"
                                                               : std::string("ended ") + lp::to_string(solve_status)) +
                  (detail.empty() ? "" : ": " + detail)),
      status(solve_status) {}

std::optional<AllocationPlan> plan_from_flows(const AllocationInstance& instance, EdgeTensor<Count> flows) {
  const std::size_t num_types = instance.num_agent_types();
  const std::size_t num_nodes = instance.num_nodes();
  require(flows.size() == num_types, "flows need one matrix per agent type");
  for (const auto& m : flows) {
    require(m.size() == num_nodes, "flow matrices must be square over all nodes");
    for (const auto& row : m) require(row.size() == num_nodes, "flow matrices must be square over all nodes");
  }
  const auto edges = instance.edges();
  const double big_m = instance.effective_big_m();

  AllocationPlan plan;
  plan.edge_used.assign(num_types, std::vector<std::vector<std::uint8_t>>(num_nodes, std::vector<std::uint8_t>(num_nodes, 0)));
  std::vector<std::vector<Count>> team_counts(instance.num_tasks, std::vector<Count>(num_types, 0));
  double energy = 0.0;
  for (std::size_t k = 0; k < num_types; ++k) {
    for (std::size_t i = 0; i < num_nodes; ++i) {
      for (std::size_t j = 0; j < num_nodes; ++j) {
        const Count x = flows[k][i][j];
        if (x == 0) continue;
        require(edge_allowed(instance, i, j), "flow on an edge outside the task graph");
        plan.edge_used[k][i][j] = 1;
        energy += instance.travel_energy[k](i, j) * x;
        if (instance.is_task(j)) team_counts[j][k] += x;
      }
    }
  }
  for (auto& counts : team_counts) plan.teams.emplace_back(std::move(counts));

  // Least solution of the difference constraints t_j >= t_i + w_kij.
  std::vector<double> t(num_nodes, 0.0);
  bool changed = true;
  for (std::size_t pass = 0; changed; ++pass) {
    if (pass > num_nodes) return std::nullopt;
    changed = false;
    for (std::size_t k = 0; k < num_types; ++k) {
      for (const auto& [i, j] : edges) {
        double w = instance.travel_time[k](i, j) + instance.work_time(k, i);
        if (!plan.edge_used[k][i][j]) w -= big_m;
        if (t[i] + w > t[j] + 1e-12 * std::max(1.0, big_m)) {
          t[j] = t[i] + w;
          changed = true;
        }
      }
    }
  }
  if (t[instance.start_node()] > 0.0) return std::nullopt;

  plan.flows = std::move(flows);
  plan.start_times = std::move(t);
  plan.mission_time = plan.start_times[instance.terminal_node()];
  plan.objective_value = instance.energy_weight * energy + instance.time_weight * plan.mission_time;
  return plan;
}

namespace {

// Rounds the flow variables; nullopt when any is fractional.
std::optional<EdgeTensor<Count>> integral_flows(const AllocationInstance& instance, const AllocationLayout& layout,
                                                const std::vector<double>& assignment, double tolerance) {
  const std::size_t num_nodes = instance.num_nodes();
  EdgeTensor<Count> flows(instance.num_agent_types(),
                          std::vector<std::vector<Count>>(num_nodes, std::vector<Count>(num_nodes, 0)));
  for (std::size_t k = 0; k < instance.num_agent_types(); ++k) {
    for (std::size_t e = 0; e < layout.edges().size(); ++e) {
      const double v = assignment[layout.flow(k, e)];
      const double r = std::round(v);
      if (std::abs(v - r) > tolerance) return std::nullopt;
      flows[k][layout.edges()[e].from][layout.edges()[e].to] = static_cast<Count>(std::max(0.0, r));
    }
  }
  return flows;
}

}  // namespace

AllocationPlan solve_allocation(const AllocationInstance& instance, const AllocationOptions& options) {
  instance.validate();
  const AllocationLayout layout(instance);
  const double tolerance = options.branch_and_bound.integrality_tolerance;
  bool strict = options.integrality == IntegralityMode::Strict;
  std::size_t nodes = 0;
  for (;;) {
    const MilpOptions milp{.strict_integer = strict, .visit_bounds = options.visit_bounds};
    const auto result = lp::solve_milp(build_milp(instance, milp), options.branch_and_bound);
    nodes += result.nodes;
    const bool usable = result.status == lp::SolveStatus::Optimal ||
                        (result.status == lp::SolveStatus::IterationLimit && result.has_incumbent);
    if (!usable) throw AllocationFailed(result.status);
    auto flows = integral_flows(instance, layout, result.assignment, tolerance);
    if (!flows) {
      if (options.integrality == IntegralityMode::Automatic && !strict) {
        strict = true;
        continue;
      }
      throw AllocationFailed(result.status, "optimal flows are fractional; use strict integrality");
    }
    auto plan = plan_from_flows(instance, std::move(*flows));
    if (!plan) throw AllocationFailed(result.status, "solver flows admit no schedule");
    plan->status = result.status;
    plan->proven_optimal = result.status == lp::SolveStatus::Optimal;
    plan->strict_integer = strict;
    plan->nodes_explored = nodes;
    return *plan;
  }
}

std::vector<Route> AllocationPlan::routes(const AllocationInstance& instance) const {
  std::vector<Route> out;
  const std::size_t num_nodes = instance.num_nodes();
  const std::size_t s = instance.start_node();
  const std::size_t u = instance.terminal_node();
  for (std::size_t k = 0; k < flows.size(); ++k) {
    auto remaining = flows[k];
    std::size_t budget = 0;
    for (const auto& row : remaining) {
      for (Count x : row) budget += x;
    }
    for (;;) {
      std::vector<std::size_t> path{s};
      Count bottleneck = 0;
      std::size_t node = s;
      while (node != u && path.size() <= budget + 1) {
        std::size_t next = num_nodes;
        for (std::size_t j = 0; j < num_nodes; ++j) {
          if (remaining[node][j] > 0) {
            next = j;
            break;
          }
        }
        if (next == num_nodes) break;
        const Count x = remaining[node][next];
        bottleneck = path.size() == 1 ? x : std::min(bottleneck, x);
        path.push_back(next);
        node = next;
      }
      if (node != u || bottleneck == 0) break;
      for (std::size_t p = 0; p + 1 < path.size(); ++p) remaining[path[p]][path[p + 1]] -= bottleneck;
      auto same = std::find_if(out.begin(), out.end(),
                               [&](const Route& r) { return r.agent_type == k && r.nodes == path; });
      if (same != out.end()) {
        same->agents += bottleneck;
      } else {
        out.push_back({k, std::move(path), bottleneck});
      }
    }
  }
  return out;
}

const char* to_string(ConstraintFamily family) {
  switch (family) {
    case ConstraintFamily::Requirement: return "requirement";
    case ConstraintFamily::Schedule: return "schedule";
    case ConstraintFamily::Energy: return "energy";
    case ConstraintFamily::FlowConservation: return "flow_conservation";
    case ConstraintFamily::Fleet: return "fleet";
    case ConstraintFamily::TeamFlow: return "team_flow";
    case ConstraintFamily::EdgeCoupling: return "edge_coupling";
    case ConstraintFamily::TeamSize: return "team_size";
    case ConstraintFamily::Domain: return "domain";
  }
  return "unknown";
}

std::vector<Violation> validate_plan(const AllocationInstance& instance, const AllocationPlan& plan,
                                     double tolerance) {
  instance.validate();
  const std::size_t num_types = instance.num_agent_types();
  const std::size_t num_nodes = instance.num_nodes();
  const std::size_t num_tasks = instance.num_tasks;
  const std::size_t s = instance.start_node();
  const std::size_t u = instance.terminal_node();
  auto square = [&](const auto& tensor) {
    if (tensor.size() != num_types) return false;
    for (const auto& m : tensor) {
      if (m.size() != num_nodes) return false;
      for (const auto& row : m) {
        if (row.size() != num_nodes) return false;
      }
    }
    return true;
  };
  require(square(plan.flows) && square(plan.edge_used), "plan edge tensors do not match the instance");
  require(plan.teams.size() == num_tasks, "plan needs one team per task");
  for (const auto& team : plan.teams) require(team.size() == num_types, "plan teams do not match the fleet");
  require(plan.start_times.size() == num_nodes, "plan needs one start time per node");

  std::vector<Violation> out;
  auto flag = [&](ConstraintFamily family, std::vector<std::size_t> indices, double slack, std::string message) {
    out.push_back({family, std::move(indices), slack, std::move(message)});
  };
  const auto& t = plan.start_times;
  const double big_m = instance.effective_big_m();

  for (std::size_t k = 0; k < num_types; ++k) {
    for (std::size_t i = 0; i < num_nodes; ++i) {
      for (std::size_t j = 0; j < num_nodes; ++j) {
        const Count x = plan.flows[k][i][j];
        const std::uint8_t r = plan.edge_used[k][i][j];
        if (!edge_allowed(instance, i, j) && (x > 0 || r > 0)) {
          flag(ConstraintFamily::Domain, {k, i, j}, x, "flow on an edge outside the task graph");
        }
        if (x > instance.fleet[k]) {
          flag(ConstraintFamily::Domain, {k, i, j}, double(x) - instance.fleet[k], "edge flow exceeds the fleet");
        }
        if (r > 1) flag(ConstraintFamily::Domain, {k, i, j}, r - 1.0, "edge indicator is not binary");
      }
    }
  }
  for (std::size_t node = 0; node < num_nodes; ++node) {
    if (!(t[node] >= -tolerance)) {
      flag(ConstraintFamily::Domain, {node}, -t[node], "negative start time");
    }
  }
  if (std::abs(t[s]) > tolerance) flag(ConstraintFamily::Domain, {s}, std::abs(t[s]), "start depot time is not 0");
  if (std::abs(plan.mission_time - t[u]) > tolerance) {
    flag(ConstraintFamily::Domain, {u}, std::abs(plan.mission_time - t[u]),
         "mission time differs from the terminal start time");
  }

  for (std::size_t i = 0; i < num_tasks; ++i) {
    const auto capability = team_capability(plan.teams[i], instance.capabilities);
    for (std::size_t c = 0; c < capability.size(); ++c) {
      const double gap = instance.requirements(i, c) - capability[c];
      if (gap > tolerance) {
        flag(ConstraintFamily::Requirement, {i, c}, gap,
             "task " + std::to_string(i + 1) + " lacks capability " + std::to_string(c + 1));
      }
    }
  }

  for (std::size_t k = 0; k < num_types; ++k) {
    for (const auto& [i, j] : instance.edges()) {
      const double lhs = t[i] - t[j] + big_m * plan.edge_used[k][i][j];
      const double rhs = big_m - instance.travel_time[k](i, j) - instance.work_time(k, i);
      if (lhs - rhs > tolerance) {
        flag(ConstraintFamily::Schedule, {k, i, j}, lhs - rhs,
             "type " + std::to_string(k + 1) + " cannot reach " + node_label(instance, j) + " from " +
                 node_label(instance, i) + " in time");
      }
    }
  }

  for (std::size_t k = 0; k < num_types; ++k) {
    double energy = 0.0;
    Count departures = 0;
    for (std::size_t i = 0; i < num_nodes; ++i) {
      for (std::size_t j = 0; j < num_nodes; ++j) energy += instance.travel_energy[k](i, j) * plan.flows[k][i][j];
    }
    for (std::size_t j = 0; j < num_nodes; ++j) departures += plan.flows[k][s][j];
    if (energy - instance.energy_limit[k] > tolerance) {
      flag(ConstraintFamily::Energy, {k}, energy - instance.energy_limit[k],
           "type " + std::to_string(k + 1) + " exceeds its energy limit");
    }
    if (departures > instance.fleet[k]) {
      flag(ConstraintFamily::Fleet, {k}, double(departures) - instance.fleet[k],
           "type " + std::to_string(k + 1) + " dispatches more agents than available");
    }
    for (std::size_t j = 0; j < num_tasks; ++j) {
      double in = 0.0;
      double out_flow = 0.0;
      for (std::size_t i = 0; i < num_nodes; ++i) {
        in += plan.flows[k][i][j];
        out_flow += plan.flows[k][j][i];
      }
      if (std::abs(in - out_flow) > tolerance) {
        flag(ConstraintFamily::FlowConservation, {k, j}, std::abs(in - out_flow),
             "type " + std::to_string(k + 1) + " flow is not conserved at task " + std::to_string(j + 1));
      }
      if (std::abs(in - plan.teams[j][k]) > tolerance) {
        flag(ConstraintFamily::TeamFlow, {k, j}, std::abs(in - plan.teams[j][k]),
             "team of task " + std::to_string(j + 1) + " differs from its arrivals");
      }
    }
    for (const auto& [i, j] : instance.edges()) {
      const double x = plan.flows[k][i][j];
      const double r = plan.edge_used[k][i][j];
      if (r - x > tolerance || x - instance.fleet[k] * r > tolerance) {
        flag(ConstraintFamily::EdgeCoupling, {k, i, j}, std::max(r - x, x - instance.fleet[k] * r),
             "edge indicator disagrees with its flow");
      }
    }
  }

  if (instance.team_size_cap) {
    for (std::size_t i = 0; i < num_tasks; ++i) {
      const Count size = plan.teams[i].total();
      if (size > *instance.team_size_cap) {
        flag(ConstraintFamily::TeamSize, {i}, double(size) - *instance.team_size_cap,
             "team of task " + std::to_string(i + 1) + " is too large");
      }
    }
  }
  return out;
}

}  // namespace capalloc
