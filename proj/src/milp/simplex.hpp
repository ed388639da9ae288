#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "energyopt/milp/problem.hpp"

namespace energyopt::milp::detail {

using Clock = std::chrono::steady_clock;

// A simplex basis that can seed a later solve of the same LP under other
// variable bounds. Columns are numbered structural, then row slacks, then
// phase-one artificials.
struct Basis {
  std::vector<std::size_t> head;       // basic column of each row
  std::vector<std::uint8_t> at_upper;  // nonbasic structural/slack columns resting at their upper bound
  std::vector<double> art_sign;        // artificial column sign per row (0 if unused)

  bool empty() const { return head.empty(); }
};

// Holds the scaled, column-compressed form of an LP so that branch-and-bound
// can re-solve it under different variable bounds without rebuilding it.
class SimplexEngine {
 public:
  explicit SimplexEngine(const LpProblem& p);

  // With `warm`, starts from that basis (dual simplex when the new bounds
  // make it primal infeasible) and falls back to a cold start if it cannot.
  Solution solve(const std::vector<double>& lower, const std::vector<double>& upper, const SolveOptions& opts,
                 std::optional<Clock::time_point> deadline = std::nullopt, const Basis* warm = nullptr,
                 Basis* final_basis = nullptr) const;

  Solution solve(const SolveOptions& opts) const;

 private:
  friend class SimplexRun;

  const LpProblem& problem_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> col_start_;
  std::vector<std::size_t> row_index_;
  std::vector<double> value_;
  std::vector<double> rhs_;
  std::vector<double> row_scale_;
  std::vector<std::size_t> row_origin_;  // scaled row -> original constraint
  std::vector<Relation> relation_;
  std::vector<double> cost_;  // minimisation form
  bool empty_row_infeasible_ = false;
};

}  // namespace energyopt::milp::detail
