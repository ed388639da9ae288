#pragma once

// Independent reference solvers used only by the test suites.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "energyopt/milp/problem.hpp"
#include "energyopt/milp/solver.hpp"

namespace oracle {

using energyopt::milp::LpProblem;
using energyopt::milp::MilpProblem;
using energyopt::milp::Relation;
using energyopt::milp::Sense;
using energyopt::milp::SolveStatus;

// Best objective over all basic feasible points of a small, bounded LP: every
// choice of n linearly independent active rows/bounds is solved directly.
inline std::optional<double> vertex_enumeration(const LpProblem& p, double tol = 1e-9) {
  const std::size_t n = p.num_variables();
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (const auto& c : p.constraints) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (const auto& t : c.terms) a(static_cast<Eigen::Index>(t.var)) += t.coef;
    rows.push_back(a);
    rhs.push_back(c.rhs);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (double b : {p.variables[j].lower, p.variables[j].upper}) {
      if (!std::isfinite(b)) continue;
      Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
      a(static_cast<Eigen::Index>(j)) = 1.0;
      rows.push_back(a);
      rhs.push_back(b);
    }
  }
  std::optional<double> best;
  const std::size_t k = rows.size();
  std::vector<bool> pick(k, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(std::min(n, k)), true);
  if (k < n) return best;
  do {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    Eigen::VectorXd b(static_cast<Eigen::Index>(n));
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (!pick[i]) continue;
      a.row(r) = rows[i].transpose();
      b(r) = rhs[i];
      ++r;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rank() < static_cast<Eigen::Index>(n)) continue;
    const Eigen::VectorXd x = lu.solve(b);
    std::vector<double> xv(x.data(), x.data() + n);
    if (p.max_violation(xv) > tol) continue;
    const double obj = p.evaluate_objective(xv);
    if (!best || (p.sense == Sense::minimize ? obj < *best : obj > *best)) best = obj;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

// Enumerates every binary assignment and solves the remaining LP. Integer
// (non-binary) variables are not supported.
inline std::optional<double> binary_enumeration(const MilpProblem& p) {
  std::vector<std::size_t> bins;
  for (std::size_t j = 0; j < p.num_variables(); ++j) {
    if (p.is_integral(j)) bins.push_back(j);
  }
  std::optional<double> best;
  for (std::size_t mask = 0; mask < (std::size_t{1} << bins.size()); ++mask) {
    LpProblem lp = p.base;
    bool skip = false;
    for (std::size_t b = 0; b < bins.size(); ++b) {
      const double v = (mask >> b) & 1U ? 1.0 : 0.0;
      auto& var = lp.variables[bins[b]];
      if (v < var.lower || v > var.upper) skip = true;
      var.lower = var.upper = v;
    }
    if (skip) continue;
    const auto s = energyopt::milp::solve_lp(lp);
    if (s.status != SolveStatus::optimal) continue;
    if (!best || (p.base.sense == Sense::minimize ? s.objective < *best : s.objective > *best)) {
      best = s.objective;
    }
  }
  return best;
}

// Random bounded MILP with up to `max_bin` binaries, `max_cont` continuous
// variables in [0, 10] and `max_rows` rows.
inline MilpProblem random_milp(std::mt19937_64& rng, std::size_t max_bin = 10, std::size_t max_cont = 8,
                               std::size_t max_rows = 12) {
  std::uniform_int_distribution<std::size_t> nb_dist(1, max_bin);
  std::uniform_int_distribution<std::size_t> nc_dist(0, max_cont);
  std::uniform_int_distribution<std::size_t> m_dist(1, max_rows);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> rel(0, 5);

  MilpProblem p;
  p.base.sense = unit(rng) < 0.5 ? Sense::minimize : Sense::maximize;
  const std::size_t nb = nb_dist(rng);
  const std::size_t nc = nc_dist(rng);
  for (std::size_t j = 0; j < nb; ++j) p.add_binary("b" + std::to_string(j), coef(rng));
  for (std::size_t j = 0; j < nc; ++j) {
    p.add_variable("c" + std::to_string(j), 0.0, 10.0, coef(rng));
  }
  const std::size_t n = nb + nc;
  // Rows are centred on a random reference point so many instances are feasible.
  std::vector<double> ref(n);
  for (std::size_t j = 0; j < n; ++j) ref[j] = j < nb ? std::round(unit(rng)) : 10.0 * unit(rng);
  const std::size_t m = m_dist(rng);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<energyopt::milp::Term> terms;
    double at_ref = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (unit(rng) < 0.35) continue;
      const double a = std::round(coef(rng) * 100.0) / 100.0;
      terms.push_back({j, a});
      at_ref += a * ref[j];
    }
    const int r = rel(rng);
    const double slack = 4.0 * unit(rng) - 1.0;
    if (r <= 2) {
      p.add_constraint("r" + std::to_string(i), terms, Relation::less_equal, at_ref + slack);
    } else if (r <= 4) {
      p.add_constraint("r" + std::to_string(i), terms, Relation::greater_equal, at_ref - slack);
    } else {
      p.add_constraint("r" + std::to_string(i), terms, Relation::equal, at_ref);
    }
  }
  return p;
}

}  // namespace oracle
