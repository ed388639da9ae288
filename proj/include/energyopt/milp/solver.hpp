#pragma once

#include "energyopt/milp/problem.hpp"

namespace energyopt::milp {

/// Bounded-variable primal simplex (two-phase, Dantzig pricing with a Bland
/// fallback on degenerate stalls) on a sparse LU factorisation of the basis. Rows are equilibrated to unit max-abs
/// coefficient before solving. Throws ValidationError on malformed input.
Solution solve_lp(const LpProblem& p, const SolveOptions& opts = {});

/// Branch-and-bound over the LP relaxation, branching on the most fractional
/// integral variable (lowest index on ties). Each branching plunges into the
/// child nearer the LP value; otherwise nodes are taken in best-bound order and
/// warm-started from their parent's basis with the dual simplex. Incumbents are polished
/// by re-solving the LP with integral variables fixed, so returned integral
/// values are exact integers.
Solution solve_milp(const MilpProblem& p, const SolveOptions& opts = {});

}  // namespace energyopt::milp
