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
#include <cstdint>
#include <string>

#include "capalloc/lp.hpp"
#include "capalloc/model.hpp"

namespace capalloc::lp {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

std::size_t LinearProgram::add_variable(double objective_coefficient, double lower, double upper,
                                        std::string name) {
  if (name.empty()) name = "x" + std::to_string(objective_.size());
  objective_.push_back(objective_coefficient);
  bounds_.push_back({lower, upper});
  names_.push_back(std::move(name));
  return objective_.size() - 1;
}

std::size_t LinearProgram::add_constraint(std::vector<Term> terms, Relation relation, double rhs,
                                          std::string name) {
  if (name.empty()) name = "c" + std::to_string(constraints_.size());
  constraints_.push_back({std::move(terms), relation, rhs, std::move(name)});
  return constraints_.size() - 1;
}

std::size_t LinearProgram::add_dense_constraint(std::span<const double> coefficients, Relation relation,
                                          double rhs, std::string name) {
  if (coefficients.size() != num_variables()) {
    throw ContractError("dense constraint arity " + std::to_string(coefficients.size()) +
                        " does not match " + std::to_string(num_variables()) + " variables");
  }
  std::vector<Term> terms;
  for (std::size_t j = 0; j < coefficients.size(); ++j) {
    if (coefficients[j] != 0.0) terms.push_back({j, coefficients[j]});
  }
  return add_constraint(std::move(terms), relation, rhs, std::move(name));
}

void LinearProgram::set_objective_coefficient(std::size_t j, double value) {
  if (j >= objective_.size()) throw ContractError("objective index out of range");
  objective_[j] = value;
}

void LinearProgram::set_bounds(std::size_t j, VariableBounds bounds) {
  if (j >= bounds_.size()) throw ContractError("bounds index out of range");
  bounds_[j] = bounds;
}

void LinearProgram::validate() const {
  for (std::size_t j = 0; j < objective_.size(); ++j) {
    if (!std::isfinite(objective_[j])) throw ContractError("non-finite objective coefficient");
    const auto [lo, up] = bounds_[j];
    if (std::isnan(lo) || std::isnan(up) || lo > up || lo == kInfinity || up == -kInfinity) {
      throw ContractError("invalid bounds on variable " + names_[j]);
    }
  }
  for (const auto& row : constraints_) {
    if (!std::isfinite(row.rhs)) throw ContractError("non-finite rhs in " + row.name);
    for (const auto& term : row.terms) {
      if (term.variable >= objective_.size()) {
        throw ContractError("constraint " + row.name + " references unknown variable");
      }
      if (!std::isfinite(term.coefficient)) throw ContractError("non-finite coefficient in " + row.name);
    }
  }
}

double LinearProgram::evaluate_objective(std::span<const double> x) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < objective_.size(); ++j) sum += objective_[j] * x[j];
  return sum;
}

double LinearProgram::max_violation(std::span<const double> x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < bounds_.size(); ++j) {
    worst = std::max(worst, bounds_[j].lower - x[j]);
    worst = std::max(worst, x[j] - bounds_[j].upper);
  }
  for (const auto& row : constraints_) {
    double lhs = 0.0;
    for (const auto& term : row.terms) lhs += term.coefficient * x[term.variable];
    switch (row.relation) {
      case Relation::LessEqual: worst = std::max(worst, lhs - row.rhs); break;
      case Relation::GreaterEqual: worst = std::max(worst, row.rhs - lhs); break;
      case Relation::Equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

void MixedIntegerProgram::validate() const {
  base.validate();
  for (std::size_t j : integral) {
    if (j >= base.num_variables()) throw ContractError("integrality index out of range");
  }
}

namespace {

enum class State : std::uint8_t { Basic, AtLower, AtUpper, Free };

constexpr std::size_t kNoRow = static_cast<std::size_t>(-1);
constexpr std::size_t kDegenerateRunBeforeBland = 50;

// Dense tableau T = B^-1 [A | I | Art] over structural, slack and
// artificial columns. Every row is  a_i x + s_i (+ sigma_i art_i) = rhs_i
// with slack bounds [0, inf) for <= rows and (-inf, 0] for >= rows.
class Tableau {
 public:
  Tableau(const LinearProgram& lp, std::span<const VariableBounds> bounds, const SimplexOptions& options)
      : options_(options), num_structural_(lp.num_variables()) {
    struct Row {
      const Constraint* source;
      bool less_equal;
    };
    std::vector<Row> rows;
    for (const auto& c : lp.constraints()) {
      switch (c.relation) {
        case Relation::LessEqual: rows.push_back({&c, true}); break;
        case Relation::GreaterEqual: rows.push_back({&c, false}); break;
        case Relation::Equal:
          rows.push_back({&c, true});
          rows.push_back({&c, false});
          break;
      }
    }
    num_rows_ = rows.size();

    // Initial nonbasic point for the structural columns.
    std::vector<double> x0(num_structural_);
    std::vector<State> state0(num_structural_);
    for (std::size_t j = 0; j < num_structural_; ++j) {
      const auto [lo, up] = bounds[j];
      if (std::isfinite(lo)) {
        x0[j] = lo;
        state0[j] = State::AtLower;
      } else if (std::isfinite(up)) {
        x0[j] = up;
        state0[j] = State::AtUpper;
      } else {
        x0[j] = 0.0;
        state0[j] = State::Free;
      }
    }

    std::vector<double> residual(num_rows_);
    std::vector<double> sigma(num_rows_, 0.0);
    std::size_t num_artificial = 0;
    for (std::size_t i = 0; i < num_rows_; ++i) {
      double lhs = 0.0;
      for (const auto& t : rows[i].source->terms) lhs += t.coefficient * x0[t.variable];
      residual[i] = rows[i].source->rhs - lhs;
      const bool ok = rows[i].less_equal ? residual[i] >= -options_.feasibility_tolerance
                                         : residual[i] <= options_.feasibility_tolerance;
      if (!ok) {
        sigma[i] = residual[i] > 0 ? 1.0 : -1.0;
        ++num_artificial;
      }
    }

    num_cols_ = num_structural_ + num_rows_ + num_artificial;
    tableau_.assign(num_rows_ * num_cols_, 0.0);
    lower_.assign(num_cols_, 0.0);
    upper_.assign(num_cols_, 0.0);
    value_.assign(num_cols_, 0.0);
    state_.assign(num_cols_, State::AtLower);
    basis_.assign(num_rows_, 0);
    row_of_.assign(num_cols_, kNoRow);
    artificial_begin_ = num_structural_ + num_rows_;

    for (std::size_t j = 0; j < num_structural_; ++j) {
      lower_[j] = bounds[j].lower;
      upper_[j] = bounds[j].upper;
      value_[j] = x0[j];
      state_[j] = state0[j];
    }

    std::size_t next_artificial = artificial_begin_;
    for (std::size_t i = 0; i < num_rows_; ++i) {
      double* row = row_ptr(i);
      for (const auto& t : rows[i].source->terms) row[t.variable] += t.coefficient;
      const std::size_t slack = num_structural_ + i;
      row[slack] = 1.0;
      if (rows[i].less_equal) {
        lower_[slack] = 0.0;
        upper_[slack] = kInfinity;
      } else {
        lower_[slack] = -kInfinity;
        upper_[slack] = 0.0;
      }
      if (sigma[i] == 0.0) {
        set_basic(i, slack, residual[i]);
      } else {
        const std::size_t art = next_artificial++;
        row[art] = sigma[i];
        lower_[art] = 0.0;
        upper_[art] = kInfinity;
        value_[slack] = 0.0;
        state_[slack] = rows[i].less_equal ? State::AtLower : State::AtUpper;
        if (sigma[i] < 0) {
          for (std::size_t j = 0; j < num_cols_; ++j) row[j] = -row[j];
        }
        set_basic(i, art, std::abs(residual[i]));
      }
    }
    max_pivots_ = options_.max_pivots != 0 ? options_.max_pivots
                                           : 10000 * std::max<std::size_t>(1, num_structural_);
  }

  SolveResult run(double objective_sign, std::span<const double> objective) {
    SolveResult result;
    result.nodes = 1;
    if (artificial_begin_ < num_cols_) {
      std::vector<double> phase1(num_cols_, 0.0);
      for (std::size_t j = artificial_begin_; j < num_cols_; ++j) phase1[j] = 1.0;
      const auto status = optimize(phase1);
      result.pivots = pivots_;
      if (status == SolveStatus::IterationLimit) {
        result.status = status;
        return result;
      }
      double infeasibility = 0.0;
      double scale = 1.0;
      for (std::size_t j = artificial_begin_; j < num_cols_; ++j) infeasibility += value_[j];
      for (std::size_t i = 0; i < num_rows_; ++i) scale = std::max(scale, std::abs(value_[basis_[i]]));
      if (infeasibility > 1e-7 * scale) {
        result.status = SolveStatus::Infeasible;
        return result;
      }
      for (std::size_t j = artificial_begin_; j < num_cols_; ++j) upper_[j] = 0.0;
    }

    std::vector<double> phase2(num_cols_, 0.0);
    for (std::size_t j = 0; j < num_structural_; ++j) phase2[j] = objective_sign * objective[j];
    const auto status = optimize(phase2);
    result.pivots = pivots_;
    result.status = status;
    if (status != SolveStatus::Optimal) return result;
    result.assignment.assign(value_.begin(), value_.begin() + static_cast<std::ptrdiff_t>(num_structural_));
    result.objective_value = objective_sign * objective_value_;
    result.proven_optimal = true;
    result.has_incumbent = true;
    return result;
  }

 private:
  double* row_ptr(std::size_t i) { return tableau_.data() + i * num_cols_; }

  void set_basic(std::size_t row, std::size_t col, double value) {
    basis_[row] = col;
    row_of_[col] = row;
    state_[col] = State::Basic;
    value_[col] = value;
  }

  void compute_reduced_costs(std::span<const double> cost) {
    reduced_.assign(cost.begin(), cost.end());
    objective_value_ = 0.0;
    for (std::size_t j = 0; j < num_cols_; ++j) objective_value_ += cost[j] * value_[j];
    for (std::size_t i = 0; i < num_rows_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = row_ptr(i);
      for (std::size_t j = 0; j < num_cols_; ++j) reduced_[j] -= cb * row[j];
    }
  }

  bool eligible(std::size_t j, double& direction) const {
    const State s = state_[j];
    if (s == State::Basic || lower_[j] == upper_[j]) return false;
    const double d = reduced_[j];
    const double tol = options_.optimality_tolerance;
    if (d < -tol && s != State::AtUpper) {
      direction = 1.0;
      return true;
    }
    if (d > tol && s != State::AtLower) {
      direction = -1.0;
      return true;
    }
    return false;
  }

  SolveStatus optimize(std::span<const double> cost) {
    compute_reduced_costs(cost);
    std::size_t degenerate_run = 0;
    for (;;) {
      if (pivots_ >= max_pivots_) return SolveStatus::IterationLimit;
      const bool bland = options_.rule == PivotRule::Bland || degenerate_run >= kDegenerateRunBeforeBland;

      std::size_t entering = num_cols_;
      double direction = 0.0;
      double best = 0.0;
      for (std::size_t j = 0; j < num_cols_; ++j) {
        double dir = 0.0;
        if (!eligible(j, dir)) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(reduced_[j]) > best) {
          best = std::abs(reduced_[j]);
          entering = j;
          direction = dir;
        }
      }
      if (entering == num_cols_) return SolveStatus::Optimal;

      // Ratio test. The entering variable may also just flip between bounds.
      double step = upper_[entering] - lower_[entering];  // inf unless boxed
      std::size_t leaving_row = kNoRow;
      double leaving_alpha = 0.0;
      for (std::size_t i = 0; i < num_rows_; ++i) {
        const double alpha = tableau_[i * num_cols_ + entering];
        if (std::abs(alpha) <= options_.pivot_tolerance) continue;
        const std::size_t b = basis_[i];
        const double rate = -direction * alpha;
        double limit;
        if (rate < 0.0) {
          if (!std::isfinite(lower_[b])) continue;
          limit = std::max(0.0, value_[b] - lower_[b]) / -rate;
        } else {
          if (!std::isfinite(upper_[b])) continue;
          limit = std::max(0.0, upper_[b] - value_[b]) / rate;
        }
        bool take = false;
        if (limit < step - 1e-12) {
          take = true;
        } else if (limit <= step + 1e-12 && leaving_row != kNoRow) {
          take = bland ? b < basis_[leaving_row] : std::abs(alpha) > std::abs(leaving_alpha);
        }
        if (take) {
          step = std::min(step, limit);
          leaving_row = i;
          leaving_alpha = alpha;
        }
      }
      if (!std::isfinite(step)) return SolveStatus::Unbounded;

      ++pivots_;
      degenerate_run = step <= options_.feasibility_tolerance ? degenerate_run + 1 : 0;
      objective_value_ += reduced_[entering] * direction * step;

      // Move along the edge.
      value_[entering] += direction * step;
      for (std::size_t i = 0; i < num_rows_; ++i) {
        const double alpha = tableau_[i * num_cols_ + entering];
        if (alpha != 0.0) value_[basis_[i]] -= direction * alpha * step;
      }

      if (leaving_row == kNoRow) {
        // Bound flip, basis unchanged.
        if (direction > 0) {
          state_[entering] = State::AtUpper;
          value_[entering] = upper_[entering];
        } else {
          state_[entering] = State::AtLower;
          value_[entering] = lower_[entering];
        }
        continue;
      }

      const std::size_t leaving = basis_[leaving_row];
      const double rate = -direction * leaving_alpha;
      if (rate < 0.0) {
        state_[leaving] = State::AtLower;
        value_[leaving] = lower_[leaving];
      } else {
        state_[leaving] = State::AtUpper;
        value_[leaving] = upper_[leaving];
      }
      row_of_[leaving] = kNoRow;
      pivot(leaving_row, entering);
      const double v = value_[entering];
      set_basic(leaving_row, entering, v);
    }
  }

  void pivot(std::size_t r, std::size_t q) {
    double* prow = row_ptr(r);
    const double inv = 1.0 / prow[q];
    nonzeros_.clear();
    for (std::size_t j = 0; j < num_cols_; ++j) {
      if (prow[j] != 0.0) {
        prow[j] *= inv;
        nonzeros_.push_back(j);
      }
    }
    prow[q] = 1.0;
    for (std::size_t i = 0; i < num_rows_; ++i) {
      if (i == r) continue;
      double* row = row_ptr(i);
      const double f = row[q];
      if (f == 0.0) continue;
      for (std::size_t j : nonzeros_) row[j] -= f * prow[j];
      row[q] = 0.0;
    }
    const double f = reduced_[q];
    if (f != 0.0) {
      for (std::size_t j : nonzeros_) reduced_[j] -= f * prow[j];
    }
    reduced_[q] = 0.0;
  }

  SimplexOptions options_;
  std::size_t num_structural_;
  std::size_t num_rows_ = 0;
  std::size_t num_cols_ = 0;
  std::size_t artificial_begin_ = 0;
  std::size_t max_pivots_ = 0;
  std::size_t pivots_ = 0;
  double objective_value_ = 0.0;
  std::vector<double> tableau_;
  std::vector<double> reduced_;
  std::vector<double> lower_, upper_, value_;
  std::vector<State> state_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> row_of_;
  std::vector<std::size_t> nonzeros_;
};

}  // namespace

SolveResult solve_lp_with_bounds(const LinearProgram& lp, std::span<const VariableBounds> bounds,
                                 const SimplexOptions& options) {
  if (bounds.size() != lp.num_variables()) throw ContractError("bounds arity mismatch");
  for (const auto& b : bounds) {
    if (b.lower > b.upper) {
      SolveResult r;
      r.status = SolveStatus::Infeasible;
      r.nodes = 1;
      return r;
    }
  }
  Tableau tableau(lp, bounds, options);
  const double sign = lp.sense() == Sense::Maximize ? -1.0 : 1.0;
  return tableau.run(sign, lp.objective());
}

SolveResult solve_lp(const LinearProgram& lp, const SimplexOptions& options) {
  lp.validate();
  return solve_lp_with_bounds(lp, lp.bounds(), options);
}

}  // namespace capalloc::lp
