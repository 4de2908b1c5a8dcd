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

// Self-contained LP / MILP engine: a bounded-variable primal simplex on a
// dense tableau and best-bound branch and bound on top of it. Callers only
// go through solve_lp / solve_milp, so another backend can be dropped in
// behind these two functions.

#ifndef CAPALLOC_LP_HPP_
#define CAPALLOC_LP_HPP_

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace capalloc::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t variable;
  double coefficient;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::string name;
};

struct VariableBounds {
  double lower = 0.0;
  double upper = kInfinity;
};

class LinearProgram {
 public:
  explicit LinearProgram(Sense sense = Sense::Minimize) : sense_(sense) {}

  std::size_t add_variable(double objective_coefficient, double lower = 0.0, double upper = kInfinity,
                           std::string name = {});
  /// Terms may list a variable more than once; coefficients are summed.
  std::size_t add_constraint(std::vector<Term> terms, Relation relation, double rhs, std::string name = {});
  /// Dense form; coefficients.size() must equal num_variables().
  std::size_t add_dense_constraint(std::span<const double> coefficients, Relation relation, double rhs,
                             std::string name = {});

  void set_sense(Sense sense) { sense_ = sense; }
  void set_objective_coefficient(std::size_t j, double value);
  void set_bounds(std::size_t j, VariableBounds bounds);

  Sense sense() const { return sense_; }
  std::size_t num_variables() const { return objective_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  const std::vector<double>& objective() const { return objective_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<VariableBounds>& bounds() const { return bounds_; }
  const std::string& variable_name(std::size_t j) const { return names_[j]; }

  /// Throws ContractError on out-of-range terms, NaNs or lower > upper.
  void validate() const;

  double evaluate_objective(std::span<const double> x) const;
  /// Largest violation of any row or bound by x (0 when feasible).
  double max_violation(std::span<const double> x) const;

 private:
  Sense sense_;
  std::vector<double> objective_;
  std::vector<VariableBounds> bounds_;
  std::vector<std::string> names_;
  std::vector<Constraint> constraints_;
};

struct MixedIntegerProgram {
  LinearProgram base;
  std::vector<std::size_t> integral;

  void validate() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(SolveStatus status);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  double objective_value = 0.0;
  std::vector<double> assignment;
  std::size_t pivots = 0;
  /// LP relaxations solved (MILP only; 1 for a plain LP).
  std::size_t nodes = 0;
  /// Branching operations performed (MILP only).
  std::size_t branchings = 0;
  /// False when an IterationLimit result carries a non-proven incumbent.
  bool proven_optimal = false;
  /// True when an IterationLimit result still carries a usable assignment.
  bool has_incumbent = false;
};

enum class PivotRule {
  /// Smallest-index entering and leaving variables throughout.
  Bland,
  /// Most negative reduced cost; falls back to Bland after a run of
  /// degenerate pivots and returns once the objective moves again.
  DantzigWithBlandFallback,
};

struct SimplexOptions {
  PivotRule rule = PivotRule::DantzigWithBlandFallback;
  /// 0 means 10000 * number of variables.
  std::size_t max_pivots = 0;
  double feasibility_tolerance = 1e-9;
  double optimality_tolerance = 1e-9;
  double pivot_tolerance = 1e-10;
};

struct BranchAndBoundOptions {
  SimplexOptions lp;
  std::size_t max_nodes = 1'000'000;
  double integrality_tolerance = 1e-6;
};

SolveResult solve_lp(const LinearProgram& lp, const SimplexOptions& options = {});

/// Solves lp with its variable bounds replaced by `bounds`.
SolveResult solve_lp_with_bounds(const LinearProgram& lp, std::span<const VariableBounds> bounds,
                                 const SimplexOptions& options = {});

SolveResult solve_milp(const MixedIntegerProgram& mip, const BranchAndBoundOptions& options = {});

/// Plain-text dump, one constraint per line as `name: coeffs relation rhs`.
void write_lp_text(const LinearProgram& lp, std::ostream& out);
void write_lp_text(const MixedIntegerProgram& mip, std::ostream& out);
std::string to_lp_text(const LinearProgram& lp);

}  // namespace capalloc::lp

#endif  // CAPALLOC_LP_HPP_
