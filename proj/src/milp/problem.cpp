#include "energyopt/milp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "energyopt/error.hpp"

namespace energyopt::milp {

std::size_t LpProblem::add_variable(std::string name, double lower, double upper, double cost) {
  variables.push_back({std::move(name), lower, upper});
  objective.push_back(cost);
  return variables.size() - 1;
}

std::size_t LpProblem::add_constraint(std::string name, std::vector<Term> terms, Relation relation,
                                      double rhs) {
  constraints.push_back({std::move(name), std::move(terms), relation, rhs});
  return constraints.size() - 1;
}

void LpProblem::validate() const {
  if (objective.size() != variables.size()) {
    throw ValidationError("objective has " + std::to_string(objective.size()) + " coefficients for " +
                          std::to_string(variables.size()) + " variables");
  }
  for (std::size_t j = 0; j < variables.size(); ++j) {
    const auto& v = variables[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower == kInf || v.upper == -kInf) {
      throw ValidationError("variable '" + v.name + "' has an invalid bound");
    }
    if (v.lower > v.upper) {
      throw ValidationError("variable '" + v.name + "' has crossed bounds");
    }
    if (!std::isfinite(objective[j])) {
      throw ValidationError("variable '" + v.name + "' has a non-finite objective coefficient");
    }
  }
  for (const auto& c : constraints) {
    if (!std::isfinite(c.rhs)) {
      throw ValidationError("constraint '" + c.name + "' has a non-finite right-hand side");
    }
    for (const auto& t : c.terms) {
      if (t.var >= variables.size()) {
        throw ValidationError("constraint '" + c.name + "' references undeclared variable " +
                              std::to_string(t.var));
      }
      if (!std::isfinite(t.coef)) {
        throw ValidationError("constraint '" + c.name + "' has a non-finite coefficient");
      }
    }
  }
}

double LpProblem::evaluate_objective(const std::vector<double>& x) const {
  double obj = objective_offset;
  for (std::size_t j = 0; j < objective.size(); ++j) obj += objective[j] * x[j];
  return obj;
}

double LpProblem::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables.size(); ++j) {
    worst = std::max({worst, variables[j].lower - x[j], x[j] - variables[j].upper});
  }
  for (const auto& c : constraints) {
    double lhs = 0.0;
    for (const auto& t : c.terms) lhs += t.coef * x[t.var];
    switch (c.relation) {
      case Relation::less_equal: worst = std::max(worst, lhs - c.rhs); break;
      case Relation::greater_equal: worst = std::max(worst, c.rhs - lhs); break;
      case Relation::equal: worst = std::max(worst, std::abs(lhs - c.rhs)); break;
    }
  }
  return worst;
}

std::size_t MilpProblem::add_variable(std::string name, double lower, double upper, double cost,
                                      VarType type) {
  integrality.push_back(type);
  return base.add_variable(std::move(name), lower, upper, cost);
}

std::size_t MilpProblem::num_integral() const {
  return static_cast<std::size_t>(
      std::count_if(integrality.begin(), integrality.end(), [](VarType t) { return t != VarType::continuous; }));
}

void MilpProblem::validate() const {
  base.validate();
  if (integrality.size() != base.variables.size()) {
    throw ValidationError("integrality flags do not match the variable count");
  }
  for (std::size_t j = 0; j < integrality.size(); ++j) {
    if (integrality[j] == VarType::binary &&
        (base.variables[j].lower < 0.0 || base.variables[j].upper > 1.0)) {
      throw ValidationError("binary variable '" + base.variables[j].name + "' has bounds outside [0,1]");
    }
  }
}

MilpProblem MilpProblem::from_lp(LpProblem lp) {
  MilpProblem p;
  p.integrality.assign(lp.variables.size(), VarType::continuous);
  p.base = std::move(lp);
  return p;
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::gap_limit: return "gap-limit";
    case SolveStatus::iteration_limit: return "iteration-limit";
  }
  return "unknown";
}

void SolveOptions::validate() const {
  if (!(feasibility_tol > 0.0) || !(integrality_tol > 0.0) || !(rel_gap > 0.0)) {
    throw ValidationError("solver tolerances must be positive");
  }
  if (time_limit && !(*time_limit > 0.0)) throw ValidationError("time limit must be positive");
}

namespace {

void write_expr(std::ostream& os, const LpProblem& p, const std::vector<Term>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    if (!first) os << " + ";
    os << t.coef << ' ' << p.variables[t.var].name;
    first = false;
  }
  if (first) os << '0';
}

const char* type_name(VarType t) {
  switch (t) {
    case VarType::continuous: return "continuous";
    case VarType::binary: return "binary";
    case VarType::integer: return "integer";
  }
  return "continuous";
}

std::string dump(const LpProblem& p, const std::vector<VarType>* types) {
  std::ostringstream os;
  os.precision(17);
  os << (p.sense == Sense::minimize ? "minimize" : "maximize") << '\n';
  std::vector<Term> obj;
  for (std::size_t j = 0; j < p.objective.size(); ++j) {
    if (p.objective[j] != 0.0) obj.push_back({j, p.objective[j]});
  }
  os << "obj: ";
  write_expr(os, p, obj);
  if (p.objective_offset != 0.0) os << " + " << p.objective_offset;
  os << '\n';
  for (std::size_t j = 0; j < p.variables.size(); ++j) {
    const auto& v = p.variables[j];
    os << "var " << v.name << " [" << v.lower << ", " << v.upper << "] "
       << type_name(types ? (*types)[j] : VarType::continuous) << '\n';
  }
  for (const auto& c : p.constraints) {
    os << c.name << ": ";
    write_expr(os, p, c.terms);
    switch (c.relation) {
      case Relation::less_equal: os << " <= "; break;
      case Relation::equal: os << " = "; break;
      case Relation::greater_equal: os << " >= "; break;
    }
    os << c.rhs << '\n';
  }
  return os.str();
}

}  // namespace

std::string to_text(const LpProblem& p) { return dump(p, nullptr); }
std::string to_text(const MilpProblem& p) { return dump(p.base, &p.integrality); }

}  // namespace energyopt::milp
