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
#include <functional>
#include <random>
#include <sstream>

#include "capalloc/lp.hpp"
#include "capalloc/model.hpp"
#include "doctest.h"

using namespace capalloc::lp;

namespace {

// Brute-force LP oracle for tiny dense problems: every vertex is the unique
// solution of n active rows/bounds; keep the feasible ones.
struct DenseLp {
  std::vector<std::vector<double>> rows;  // a . x <= rhs
  std::vector<double> rhs;
  std::vector<double> cost;               // minimize
};

bool solve_square(std::vector<std::vector<double>> m, std::vector<double> v, std::vector<double>& x) {
  const std::size_t n = v.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-10) return false;
    std::swap(m[piv], m[col]);
    std::swap(v[piv], v[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
      v[r] -= f * v[col];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = v[i] / m[i][i];
  return true;
}

// Returns the best vertex objective, or NaN when no vertex is feasible.
double vertex_enumeration(const DenseLp& p) {
  const std::size_t n = p.cost.size();
  const std::size_t m = p.rows.size();
  double best = std::nan("");
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t from) {
    if (depth == n) {
      std::vector<std::vector<double>> a;
      std::vector<double> b;
      for (std::size_t r : pick) {
        a.push_back(p.rows[r]);
        b.push_back(p.rhs[r]);
      }
      std::vector<double> x;
      if (!solve_square(a, b, x)) return;
      for (std::size_t r = 0; r < m; ++r) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < n; ++j) lhs += p.rows[r][j] * x[j];
        if (lhs > p.rhs[r] + 1e-7) return;
      }
      double obj = 0.0;
      for (std::size_t j = 0; j < n; ++j) obj += p.cost[j] * x[j];
      if (std::isnan(best) || obj < best) best = obj;
      return;
    }
    for (std::size_t r = from; r < m; ++r) {
      pick[depth] = r;
      rec(depth + 1, r + 1);
    }
  };
  rec(0, 0);
  return best;
}

void check_duality(const LinearProgram& lp, const SolveResult& r) {
  REQUIRE(r.status == SolveStatus::Optimal);
  const double recomputed = lp.evaluate_objective(r.assignment);
  CHECK(std::abs(recomputed - r.objective_value) <= 1e-6 * (1.0 + std::abs(r.objective_value)));
  CHECK(lp.max_violation(r.assignment) <= 1e-7);
}

}  // namespace

TEST_CASE("solve_lp: max x with x <= 3") {
  LinearProgram lp(Sense::Maximize);
  const auto x = lp.add_variable(1.0);
  lp.add_constraint({{x, 1.0}}, Relation::LessEqual, 3.0);
  const auto r = solve_lp(lp);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.objective_value == doctest::Approx(3.0));
  CHECK(r.assignment[x] == doctest::Approx(3.0));
  check_duality(lp, r);
}

TEST_CASE("solve_lp: max b with 2a1 >= b, 2a2 >= b, a1 + a2 = 1") {
  for (auto rule : {PivotRule::Bland, PivotRule::DantzigWithBlandFallback}) {
    LinearProgram lp(Sense::Maximize);
    const auto a1 = lp.add_variable(0.0);
    const auto a2 = lp.add_variable(0.0);
    const auto b = lp.add_variable(1.0);
    lp.add_constraint({{a1, 2.0}, {b, -1.0}}, Relation::GreaterEqual, 0.0);
    lp.add_constraint({{a2, 2.0}, {b, -1.0}}, Relation::GreaterEqual, 0.0);
    lp.add_constraint({{a1, 1.0}, {a2, 1.0}}, Relation::Equal, 1.0);
    const auto r = solve_lp(lp, {.rule = rule});
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.assignment[b] == doctest::Approx(1.0));
    CHECK(r.assignment[a1] == doctest::Approx(0.5));
    CHECK(r.assignment[a2] == doctest::Approx(0.5));
    check_duality(lp, r);
  }
}

TEST_CASE("solve_lp: contradictory rows are infeasible") {
  LinearProgram lp;
  const auto x = lp.add_variable(1.0);
  lp.add_constraint({{x, 1.0}}, Relation::GreaterEqual, 2.0);
  lp.add_constraint({{x, 1.0}}, Relation::LessEqual, 1.0);
  CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("solve_lp: unbounded ray is reported") {
  LinearProgram lp(Sense::Maximize);
  const auto x = lp.add_variable(1.0);
  const auto y = lp.add_variable(0.0);
  lp.add_constraint({{x, 1.0}, {y, -1.0}}, Relation::LessEqual, 1.0);
  CHECK(solve_lp(lp).status == SolveStatus::Unbounded);
}

TEST_CASE("solve_lp: free, negative and boxed variables") {
  LinearProgram lp;
  const auto f = lp.add_variable(1.0, -kInfinity, kInfinity);
  const auto n = lp.add_variable(-1.0, -5.0, -1.0);
  const auto box = lp.add_variable(-2.0, 0.5, 2.5);
  lp.add_constraint({{f, 1.0}, {n, 1.0}}, Relation::GreaterEqual, -3.0);
  lp.add_constraint({{f, 1.0}, {box, 1.0}}, Relation::GreaterEqual, 0.0);
  const auto r = solve_lp(lp);
  check_duality(lp, r);
  // n pinned at -1, box at 2.5, f = max(-3 - n, -box) = max(-2, -2.5) = -2.
  CHECK(r.assignment[f] == doctest::Approx(-2.0));
  CHECK(r.assignment[n] == doctest::Approx(-1.0));
  CHECK(r.assignment[box] == doctest::Approx(2.5));
  CHECK(r.objective_value == doctest::Approx(-2.0 + 1.0 - 5.0));
}

TEST_CASE("solve_lp: iteration cap reports IterationLimit") {
  LinearProgram lp(Sense::Maximize);
  std::vector<std::size_t> vars;
  for (int j = 0; j < 6; ++j) vars.push_back(lp.add_variable(1.0 + j));
  for (int i = 0; i < 6; ++i) {
    std::vector<Term> t;
    for (int j = 0; j <= i; ++j) t.push_back({vars[j], 1.0});
    lp.add_constraint(t, Relation::LessEqual, 1.0 + i);
  }
  const auto r = solve_lp(lp, {.max_pivots = 1});
  CHECK(r.status == SolveStatus::IterationLimit);
}

TEST_CASE("solve_lp: invalid programs are rejected") {
  LinearProgram lp;
  lp.add_variable(1.0, 2.0, 1.0);
  CHECK_THROWS_AS(solve_lp(lp), capalloc::ContractError);
  LinearProgram lp2;
  lp2.add_variable(1.0);
  lp2.add_constraint({{3, 1.0}}, Relation::LessEqual, 1.0);
  CHECK_THROWS_AS(solve_lp(lp2), capalloc::ContractError);
}

TEST_CASE("solve_lp: matches vertex enumeration on random bounded LPs") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int optimal = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const std::size_t m = 1 + trial % 5;
    DenseLp oracle;
    LinearProgram lp;
    for (std::size_t j = 0; j < n; ++j) {
      oracle.cost.push_back(u(rng));
      lp.add_variable(oracle.cost.back(), 0.0, 4.0);
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(n);
      for (auto& v : row) v = u(rng);
      const double rhs = u(rng);
      const bool geq = (trial + i) % 3 == 0;
      lp.add_dense_constraint(row, geq ? Relation::GreaterEqual : Relation::LessEqual, rhs);
      if (geq) {
        std::vector<double> neg(row);
        for (auto& v : neg) v = -v;
        oracle.rows.push_back(neg);
        oracle.rhs.push_back(-rhs);
      } else {
        oracle.rows.push_back(row);
        oracle.rhs.push_back(rhs);
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> lo(n, 0.0), hi(n, 0.0);
      lo[j] = -1.0;
      hi[j] = 1.0;
      oracle.rows.push_back(lo);
      oracle.rhs.push_back(0.0);
      oracle.rows.push_back(hi);
      oracle.rhs.push_back(4.0);
    }
    const double expected = vertex_enumeration(oracle);
    for (auto rule : {PivotRule::Bland, PivotRule::DantzigWithBlandFallback}) {
      const auto r = solve_lp(lp, {.rule = rule});
      if (std::isnan(expected)) {
        CHECK(r.status == SolveStatus::Infeasible);
      } else {
        check_duality(lp, r);
        CHECK(r.objective_value == doctest::Approx(expected).epsilon(1e-7));
      }
    }
    if (!std::isnan(expected)) ++optimal;
  }
  CHECK(optimal > 100);
}

TEST_CASE("solve_lp: degenerate learner-shaped LP terminates") {
  // Many identical sample rows; the normalization row makes it degenerate.
  LinearProgram lp(Sense::Maximize);
  const auto a1 = lp.add_variable(0.0);
  const auto a2 = lp.add_variable(0.0);
  const auto b = lp.add_variable(1.0);
  for (int rep = 0; rep < 30; ++rep) {
    lp.add_constraint({{a1, 2.0}, {a2, 2.0}, {b, -1.0}}, Relation::GreaterEqual, 0.0);
    lp.add_constraint({{a1, 1.0}, {a2, 3.0}, {b, -1.0}}, Relation::GreaterEqual, 0.0);
  }
  lp.add_constraint({{a1, 1.0}, {a2, 1.0}}, Relation::Equal, 1.0);
  for (auto rule : {PivotRule::Bland, PivotRule::DantzigWithBlandFallback}) {
    const auto r = solve_lp(lp, {.rule = rule});
    check_duality(lp, r);
    CHECK(r.objective_value == doctest::Approx(2.0));
  }
}

TEST_CASE("solve_lp: deterministic") {
  LinearProgram lp(Sense::Maximize);
  const auto x = lp.add_variable(1.0);
  const auto y = lp.add_variable(1.0);
  lp.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::LessEqual, 1.0);
  const auto r1 = solve_lp(lp);
  const auto r2 = solve_lp(lp);
  CHECK(r1.assignment == r2.assignment);
  CHECK(r1.pivots == r2.pivots);
}

TEST_CASE("solve_milp: rounding forced up") {
  MixedIntegerProgram mip;
  const auto x = mip.base.add_variable(1.0, 0.0, 1.0);
  mip.base.add_constraint({{x, 1.0}}, Relation::GreaterEqual, 0.3);
  mip.integral = {x};
  const auto r = solve_milp(mip);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.assignment[x] == 1.0);
  CHECK(r.objective_value == 1.0);
}

TEST_CASE("solve_milp: integral relaxation needs no branching") {
  MixedIntegerProgram mip;
  mip.base.set_sense(Sense::Maximize);
  const auto x = mip.base.add_variable(1.0, 0.0, 5.0);
  const auto y = mip.base.add_variable(2.0, 0.0, 5.0);
  mip.base.add_constraint({{x, 1.0}, {y, 1.0}}, Relation::LessEqual, 4.0);
  mip.integral = {x, y};
  const auto r = solve_milp(mip);
  const auto relaxed = solve_lp(mip.base);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(r.branchings == 0);
  CHECK(r.nodes == 1);
  CHECK(r.objective_value == doctest::Approx(relaxed.objective_value));
  CHECK(r.assignment == relaxed.assignment);
}

TEST_CASE("solve_milp: infeasible integer program") {
  MixedIntegerProgram mip;
  const auto x = mip.base.add_variable(1.0, 0.0, 3.0);
  mip.base.add_constraint({{x, 2.0}}, Relation::Equal, 3.0);
  mip.integral = {x};
  CHECK(solve_milp(mip).status == SolveStatus::Infeasible);
}

TEST_CASE("solve_milp: node cap returns a flagged incumbent") {
  MixedIntegerProgram mip;
  mip.base.set_sense(Sense::Maximize);
  std::vector<Term> knap;
  for (int j = 0; j < 8; ++j) {
    const auto v = mip.base.add_variable(3.0 + j, 0.0, 1.0);
    knap.push_back({v, 2.0 + j * 0.37});
    mip.integral.push_back(v);
  }
  mip.base.add_constraint(knap, Relation::LessEqual, 9.1);
  const auto full = solve_milp(mip);
  REQUIRE(full.status == SolveStatus::Optimal);
  CHECK(full.proven_optimal);
  const auto capped = solve_milp(mip, {.max_nodes = 3});
  CHECK(capped.status == SolveStatus::IterationLimit);
  CHECK_FALSE(capped.proven_optimal);
}

namespace {

// Exhaustive optimum of a pure integer program with small boxes.
double enumerate_integer(const LinearProgram& lp, bool& feasible) {
  const std::size_t n = lp.num_variables();
  std::vector<double> x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = lp.bounds()[j].lower;
  feasible = false;
  double best = 0.0;
  const double sign = lp.sense() == Sense::Maximize ? -1.0 : 1.0;
  for (;;) {
    if (lp.max_violation(x) <= 1e-9) {
      const double obj = sign * lp.evaluate_objective(x);
      if (!feasible || obj < best) best = obj;
      feasible = true;
    }
    std::size_t j = 0;
    while (j < n && x[j] >= lp.bounds()[j].upper) {
      x[j] = lp.bounds()[j].lower;
      ++j;
    }
    if (j == n) break;
    x[j] += 1.0;
  }
  return sign * best;
}

}  // namespace

TEST_CASE("solve_milp: equals exhaustive enumeration on random integer programs") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> box(1, 3);
  int feasible_count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 12;
    MixedIntegerProgram mip;
    mip.base.set_sense(trial % 2 ? Sense::Maximize : Sense::Minimize);
    double states = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      int up = box(rng);
      while (states * (up + 1) > 100000.0 && up > 1) --up;
      states *= up + 1;
      mip.integral.push_back(mip.base.add_variable(std::round(u(rng) * 50) / 10, 0.0, up));
    }
    const std::size_t m = 1 + trial % 4;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<double> row(n);
      for (auto& v : row) v = std::round(u(rng) * 40) / 10;
      const auto rel = i % 3 == 0 ? Relation::GreaterEqual : (i % 3 == 1 ? Relation::LessEqual : Relation::Equal);
      double rhs = std::round(u(rng) * 30) / 10;
      if (rel == Relation::Equal) {
        // Make equality rows satisfiable by some lattice point.
        rhs = 0.0;
        for (std::size_t j = 0; j < n; ++j) rhs += row[j] * (j % 2);
      }
      mip.base.add_dense_constraint(row, rel, rhs);
    }
    bool feasible = false;
    const double expected = enumerate_integer(mip.base, feasible);
    const auto r = solve_milp(mip);
    if (!feasible) {
      CHECK(r.status == SolveStatus::Infeasible);
      continue;
    }
    ++feasible_count;
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective_value == doctest::Approx(expected).epsilon(1e-9));
    CHECK(mip.base.max_violation(r.assignment) <= 1e-6);
  }
  CHECK(feasible_count > 50);
}

TEST_CASE("write_lp_text: one constraint per line") {
  MixedIntegerProgram mip;
  const auto x = mip.base.add_variable(1.0, 0.0, 1.0, "x");
  const auto y = mip.base.add_variable(-2.0, 0.0, kInfinity, "y");
  mip.base.add_constraint({{x, 1.0}, {y, -3.0}}, Relation::GreaterEqual, 0.5, "row");
  mip.integral = {x};
  std::ostringstream s;
  write_lp_text(mip, s);
  const std::string text = s.str();
  CHECK(text.find("minimize: 1 x - 2 y\n") != std::string::npos);
  CHECK(text.find("row: 1 x - 3 y >= 0.5\n") != std::string::npos);
  CHECK(text.find("0 <= x <= 1\n") != std::string::npos);
  CHECK(text.find("integer: x\n") != std::string::npos);
}
