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

#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "capalloc/lp.hpp"

namespace capalloc::lp {

namespace {

struct Node {
  double bound;  // relaxation objective, minimization sense
  std::uint64_t id;
  std::vector<VariableBounds> bounds;
  std::vector<double> solution;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Index of the integral variable whose fractional part is closest to 1/2,
// or npos when the point is integral within tolerance.
std::size_t most_fractional(const std::vector<std::size_t>& integral, const std::vector<double>& x,
                            double tolerance) {
  std::size_t best = static_cast<std::size_t>(-1);
  double best_score = -1.0;
  for (std::size_t j : integral) {
    const double frac = x[j] - std::floor(x[j]);
    if (frac <= tolerance || frac >= 1.0 - tolerance) continue;
    const double score = 0.5 - std::abs(frac - 0.5);
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

}  // namespace

SolveResult solve_milp(const MixedIntegerProgram& mip, const BranchAndBoundOptions& options) {
  mip.validate();
  const LinearProgram& lp = mip.base;
  const double sign = lp.sense() == Sense::Maximize ? -1.0 : 1.0;
  constexpr std::size_t npos = static_cast<std::size_t>(-1);

  SolveResult out;
  std::vector<VariableBounds> root_bounds = lp.bounds();
  // Integral variables only ever take integral bounds.
  for (std::size_t j : mip.integral) {
    root_bounds[j].lower = std::ceil(root_bounds[j].lower - options.integrality_tolerance);
    root_bounds[j].upper = std::floor(root_bounds[j].upper + options.integrality_tolerance);
  }

  bool have_incumbent = false;
  double incumbent_value = kInfinity;  // minimization sense
  std::vector<double> incumbent;

  auto prunable = [&](double bound) {
    return have_incumbent && bound >= incumbent_value - 1e-9 * std::max(1.0, std::abs(incumbent_value));
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::uint64_t next_id = 0;

  // Solves a node relaxation; either records an integral incumbent or queues it.
  auto process = [&](std::vector<VariableBounds> bounds) -> SolveStatus {
    SolveResult r = solve_lp_with_bounds(lp, bounds, options.lp);
    ++out.nodes;
    out.pivots += r.pivots;
    if (r.status != SolveStatus::Optimal) return r.status;
    const double bound = sign * r.objective_value;
    if (prunable(bound)) return r.status;
    if (most_fractional(mip.integral, r.assignment, options.integrality_tolerance) == npos) {
      have_incumbent = true;
      incumbent_value = bound;
      incumbent = std::move(r.assignment);
      return r.status;
    }
    open.push(Node{bound, next_id++, std::move(bounds), std::move(r.assignment)});
    return r.status;
  };

  const SolveStatus root = process(root_bounds);
  if (root == SolveStatus::Infeasible || root == SolveStatus::Unbounded ||
      root == SolveStatus::IterationLimit) {
    out.status = root;
    return out;
  }

  bool node_limit_hit = false;
  while (!open.empty()) {
    if (out.nodes >= options.max_nodes) {
      node_limit_hit = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (prunable(node.bound)) continue;
    const std::size_t j = most_fractional(mip.integral, node.solution, options.integrality_tolerance);
    ++out.branchings;
    const double v = node.solution[j];

    auto down = node.bounds;
    down[j].upper = std::floor(v);
    auto up = std::move(node.bounds);
    up[j].lower = std::ceil(v);
    for (auto* child : {&down, &up}) {
      if ((*child)[j].lower > (*child)[j].upper) continue;
      if (process(std::move(*child)) == SolveStatus::IterationLimit) node_limit_hit = true;
    }
  }

  if (!have_incumbent) {
    out.status = node_limit_hit ? SolveStatus::IterationLimit : SolveStatus::Infeasible;
    return out;
  }
  for (std::size_t j : mip.integral) incumbent[j] = std::round(incumbent[j]);
  out.assignment = std::move(incumbent);
  out.objective_value = lp.evaluate_objective(out.assignment);
  out.has_incumbent = true;
  out.proven_optimal = !node_limit_hit;
  out.status = node_limit_hit ? SolveStatus::IterationLimit : SolveStatus::Optimal;
  return out;
}

}  // namespace capalloc::lp
