#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace energyopt::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class Relation { less_equal, equal, greater_equal };
enum class VarType { continuous, binary, integer };

struct Term {
  std::size_t var;
  double coef;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

/// A linear program: optimise objective·x (+ constant offset) subject to
/// linear rows and per-variable bounds. Infinite bounds are allowed.
struct LpProblem {
  Sense sense = Sense::minimize;
  std::vector<double> objective;
  double objective_offset = 0.0;
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;

  std::size_t add_variable(std::string name, double lower, double upper, double cost = 0.0);
  std::size_t add_constraint(std::string name, std::vector<Term> terms, Relation relation, double rhs);

  std::size_t num_variables() const { return variables.size(); }
  std::size_t num_constraints() const { return constraints.size(); }

  /// Throws ValidationError on undeclared variables, crossed or NaN bounds, or
  /// an objective vector of the wrong length.
  void validate() const;

  /// objective·x + offset, evaluated in the problem's own sense.
  double evaluate_objective(const std::vector<double>& x) const;

  /// Largest violation over all rows and bounds (0 when feasible).
  double max_violation(const std::vector<double>& x) const;
};

struct MilpProblem {
  LpProblem base;
  std::vector<VarType> integrality;

  std::size_t add_variable(std::string name, double lower, double upper, double cost = 0.0,
                           VarType type = VarType::continuous);
  std::size_t add_binary(std::string name, double cost = 0.0) {
    return add_variable(std::move(name), 0.0, 1.0, cost, VarType::binary);
  }
  std::size_t add_constraint(std::string name, std::vector<Term> terms, Relation relation, double rhs) {
    return base.add_constraint(std::move(name), std::move(terms), relation, rhs);
  }

  std::size_t num_variables() const { return base.num_variables(); }
  std::size_t num_integral() const;
  bool is_integral(std::size_t j) const { return integrality[j] != VarType::continuous; }

  void validate() const;

  /// Wraps an LP with every variable continuous.
  static MilpProblem from_lp(LpProblem lp);
};

enum class SolveStatus { optimal, infeasible, unbounded, gap_limit, iteration_limit };

std::string to_string(SolveStatus status);

struct Solution {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<double> values;
  double objective = 0.0;
  // Relative MIP gap: 0 for proven optimal, +inf when no incumbent exists.
  double gap = 0.0;
  // Row duals in the problem's own sense (LP solves only, empty otherwise).
  std::vector<double> duals;
  std::size_t iterations = 0;
  std::size_t nodes = 0;

  bool has_values() const { return !values.empty(); }
};

struct SolveOptions {
  double feasibility_tol = 1e-7;
  double integrality_tol = 1e-6;
  double rel_gap = 1e-6;
  std::size_t max_nodes = 1'000'000;
  std::size_t max_lp_iterations = 200'000;
  std::optional<double> time_limit;  // seconds

  void validate() const;
};

/// Plain-text dump, one line per row:
///   minimize|maximize
///   obj: <coef> <name> + ... [+ <offset>]
///   var <name> [<lower>, <upper>] continuous|binary|integer
///   <row name>: <coef> <name> + ... <=|=|>= <rhs>
std::string to_text(const LpProblem& p);
std::string to_text(const MilpProblem& p);

}  // namespace energyopt::milp
