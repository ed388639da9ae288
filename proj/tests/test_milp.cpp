#include <cmath>
#include <random>

#include "doctest.h"
#include "energyopt/error.hpp"
#include "energyopt/milp/solver.hpp"
#include "support/dense_lp.hpp"
#include "support/oracles.hpp"

using namespace energyopt::milp;

namespace {

LpProblem two_var_lp() {
  LpProblem p;
  p.sense = Sense::maximize;
  const auto x = p.add_variable("x", 0.0, kInf, 3.0);
  const auto y = p.add_variable("y", 0.0, kInf, 2.0);
  p.add_constraint("cap", {{x, 1.0}, {y, 1.0}}, Relation::less_equal, 4.0);
  p.add_constraint("xcap", {{x, 1.0}}, Relation::less_equal, 2.0);
  return p;
}

// Lagrangian bound b'y + sum_j min_{x in [l,u]} (c_j - y'A_j) x_j, valid for
// any sign-feasible y. Computed in minimisation form.
double lagrangian_bound(const LpProblem& p, const std::vector<double>& duals) {
  const double s = p.sense == Sense::maximize ? -1.0 : 1.0;
  std::vector<double> reduced(p.num_variables());
  for (std::size_t j = 0; j < reduced.size(); ++j) reduced[j] = s * p.objective[j];
  double bound = s * p.objective_offset;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const double y = s * duals[i];
    bound += y * p.constraints[i].rhs;
    for (const auto& t : p.constraints[i].terms) reduced[t.var] -= y * t.coef;
  }
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    const double d = reduced[j];
    const auto& v = p.variables[j];
    if (std::abs(d) < 1e-12) continue;
    bound += d > 0 ? d * v.lower : d * v.upper;
  }
  return s * bound;
}

}  // namespace

TEST_CASE("solve_lp: textbook maximisation matches vertex enumeration") {
  const auto p = two_var_lp();
  const auto oracle_best = oracle::vertex_enumeration(p);
  REQUIRE(oracle_best);
  CHECK(*oracle_best == doctest::Approx(10.0));
  const auto s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.values[0] == doctest::Approx(2.0));
  CHECK(s.values[1] == doctest::Approx(2.0));
  CHECK(s.objective == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("solve_lp: bound-attaining and unbounded cases") {
  LpProblem p;
  p.add_variable("x", 0.0, kInf, 1.0);
  auto s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.values[0] == 0.0);
  CHECK(s.objective == 0.0);

  p.sense = Sense::maximize;
  s = solve_lp(p);
  CHECK(s.status == SolveStatus::unbounded);
}

TEST_CASE("solve_lp: infeasible rows and free variables") {
  LpProblem p;
  const auto x = p.add_variable("x", -kInf, kInf, 1.0);
  p.add_constraint("lo", {{x, 1.0}}, Relation::greater_equal, 3.0);
  auto s = solve_lp(p);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.values[0] == doctest::Approx(3.0));

  p.add_constraint("hi", {{x, 2.0}}, Relation::less_equal, 4.0);
  s = solve_lp(p);
  CHECK(s.status == SolveStatus::infeasible);
}

TEST_CASE("solve_lp: empty rows are dropped or declared infeasible") {
  LpProblem p;
  p.add_variable("x", 0.0, 1.0, -1.0);
  p.add_constraint("empty_ok", {}, Relation::less_equal, 1.0);
  CHECK(solve_lp(p).status == SolveStatus::optimal);
  p.add_constraint("empty_bad", {}, Relation::greater_equal, 1.0);
  CHECK(solve_lp(p).status == SolveStatus::infeasible);
}

TEST_CASE("validation rejects malformed problems before solving") {
  LpProblem p;
  p.add_variable("x", 0.0, 1.0, 1.0);
  p.add_constraint("bad", {{3, 1.0}}, Relation::less_equal, 1.0);
  CHECK_THROWS_AS(solve_lp(p), energyopt::ValidationError);

  LpProblem q;
  q.add_variable("x", 2.0, 1.0, 1.0);
  CHECK_THROWS_AS(solve_lp(q), energyopt::ValidationError);

  MilpProblem m;
  m.add_variable("b", 0.0, 2.0, 1.0, VarType::binary);
  CHECK_THROWS_AS(solve_milp(m), energyopt::ValidationError);

  SolveOptions bad;
  bad.rel_gap = 0.0;
  CHECK_THROWS_AS(solve_lp(two_var_lp(), bad), energyopt::ValidationError);
}

TEST_CASE("solve_milp: small binary examples") {
  MilpProblem p;
  const auto a = p.add_binary("a", 2.0);
  const auto b = p.add_binary("b", 3.0);
  p.add_constraint("cover", {{a, 1.0}, {b, 1.0}}, Relation::greater_equal, 1.0);
  const auto oracle_best = oracle::binary_enumeration(p);
  REQUIRE(oracle_best);
  CHECK(*oracle_best == doctest::Approx(2.0));
  auto s = solve_milp(p);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.values[a] == 1.0);
  CHECK(s.values[b] == 0.0);
  CHECK(s.objective == doctest::Approx(2.0));
  CHECK(s.gap == 0.0);

  p.base.constraints[0].rhs = 3.0;
  s = solve_milp(p);
  CHECK(s.status == SolveStatus::infeasible);
}

TEST_CASE("solve_milp on an all-continuous problem equals solve_lp") {
  const auto lp = two_var_lp();
  const auto a = solve_lp(lp);
  const auto b = solve_milp(MilpProblem::from_lp(lp));
  REQUIRE(b.status == SolveStatus::optimal);
  CHECK(a.objective == b.objective);
  CHECK(a.values == b.values);
}

TEST_CASE("solve_milp: general integers") {
  // max x + y, 2x + 2y <= 7, integers -> 3
  MilpProblem p;
  p.base.sense = Sense::maximize;
  const auto x = p.add_variable("x", 0.0, 10.0, 1.0, VarType::integer);
  const auto y = p.add_variable("y", 0.0, 10.0, 1.0, VarType::integer);
  p.add_constraint("c", {{x, 2.0}, {y, 2.0}}, Relation::less_equal, 7.0);
  const auto s = solve_milp(p);
  REQUIRE(s.status == SolveStatus::optimal);
  CHECK(s.objective == doctest::Approx(3.0));
  CHECK(s.values[x] == std::round(s.values[x]));
}

TEST_CASE("solve_milp: node budget exhaustion reports gap-limit") {
  // Knapsack whose relaxation is fractional at the root.
  MilpProblem p;
  p.base.sense = Sense::maximize;
  std::vector<Term> row;
  for (int j = 0; j < 12; ++j) {
    const auto v = p.add_binary("x" + std::to_string(j), 10.0 + j);
    row.push_back({v, 7.0 + 0.5 * j});
  }
  p.add_constraint("w", row, Relation::less_equal, 40.3);
  SolveOptions opts;
  opts.max_nodes = 3;
  const auto s = solve_milp(p, opts);
  CHECK(s.status == SolveStatus::gap_limit);
  CHECK(s.gap > 0.0);
}

TEST_CASE("random LPs agree with vertex enumeration; duals certify optimality") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto milp = oracle::random_milp(rng, 2, 3, 5);
    auto lp = milp.base;
    for (auto& v : lp.variables) v.upper = std::min(v.upper, 10.0);
    const auto expect = oracle::vertex_enumeration(lp);
    const auto s = solve_lp(lp);
    if (!expect) {
      CHECK(s.status == SolveStatus::infeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(s.objective == doctest::Approx(*expect).epsilon(1e-7));
    CHECK(lp.max_violation(s.values) <= 1e-7);
    const double bound = lagrangian_bound(lp, s.duals);
    CHECK(std::abs(bound - s.objective) <= 1e-6 * std::max(1.0, std::abs(s.objective)));
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("random MILPs agree with binary enumeration and are deterministic") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto p = oracle::random_milp(rng, 6, 4, 8);
    const auto expect = oracle::binary_enumeration(p);
    const auto s = solve_milp(p);
    if (!expect) {
      CHECK(s.status == SolveStatus::infeasible);
      continue;
    }
    REQUIRE(s.status == SolveStatus::optimal);
    CHECK(std::abs(s.objective - *expect) <= 1e-6);
    CHECK(p.base.max_violation(s.values) <= 1e-7);
    const auto again = solve_milp(p);
    CHECK(again.objective == s.objective);
    CHECK(again.status == s.status);
  }
}

TEST_CASE("dense tableau oracle agrees with vertex enumeration") {
  // Pure LPs: the MILP wrapper with no binaries fixed is just DenseLp.
  std::mt19937_64 rng(19);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    auto p = oracle::random_milp(rng, 1, 4, 6);
    p.integrality.assign(p.num_variables(), VarType::continuous);
    p.base.variables[0].upper = 1.0;
    const auto expect = oracle::vertex_enumeration(p.base);
    const auto got = oracle::brute_force_milp(p);
    REQUIRE(expect.has_value() == got.has_value());
    if (!expect) continue;
    CHECK(*got == doctest::Approx(*expect).epsilon(1e-9));
    ++checked;
  }
  CHECK(checked > 60);
}

TEST_CASE("text dump has one line per row") {
  const auto text = to_text(two_var_lp());
  CHECK(text.find("maximize\n") == 0);
  CHECK(text.find("cap: 1 x + 1 y <= 4\n") != std::string::npos);
  CHECK(text.find("var x [0, inf] continuous\n") != std::string::npos);
}
