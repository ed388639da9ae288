#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <queue>

#include "energyopt/milp/solver.hpp"
#include "simplex.hpp"

namespace energyopt::milp {

namespace {

using detail::Clock;

struct BoundChange {
  std::size_t var;
  double lower;
  double upper;
};

struct Node {
  double bound;  // parent LP objective, minimisation form
  double rank;   // bound rounded to the tie tolerance
  std::size_t id;
  std::vector<BoundChange> changes;
  std::shared_ptr<const detail::Basis> basis;  // parent's optimal basis
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    // Near-equal bounds go newest first, so degenerate trees are searched
    // depth first rather than level by level.
    if (a.rank != b.rank) return a.rank > b.rank;
    return a.id < b.id;
  }
};

double relative_gap(double incumbent, double bound) {
  if (!std::isfinite(incumbent)) return kInf;
  return std::max(0.0, incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

// Rounds every fractional integral variable in a direction that keeps each
// row it appears in satisfied, with all other values held. Succeeds on
// models whose integral variables only gate continuous flows.
class SimpleRounding {
 public:
  explicit SimpleRounding(const MilpProblem& p) : p_(p), rows_of_(p.num_variables()) {
    const auto& rows = p.base.constraints;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (const auto& t : rows[i].terms) rows_of_[t.var].push_back({i, t.coef});
    }
  }

  std::optional<std::vector<double>> round(const std::vector<double>& x, const std::vector<double>& lower,
                                           const std::vector<double>& upper, double integrality_tol) const {
    const auto& rows = p_.base.constraints;
    std::vector<double> activity(rows.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (const auto& t : rows[i].terms) activity[i] += t.coef * x[t.var];
    }
    std::vector<double> y = x;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (!p_.is_integral(j)) continue;
      const double nearest = std::round(y[j]);
      if (std::abs(y[j] - nearest) <= integrality_tol) {
        y[j] = nearest;
        continue;
      }
      const double other = nearest > y[j] ? std::floor(y[j]) : std::ceil(y[j]);
      bool done = false;
      for (double r : {nearest, other}) {
        if (r < lower[j] || r > upper[j]) continue;
        const double delta = r - y[j];
        bool ok = true;
        for (const auto& [i, a] : rows_of_[j]) {
          if (!satisfied(rows[i], activity[i] + a * delta)) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        for (const auto& [i, a] : rows_of_[j]) activity[i] += a * delta;
        y[j] = r;
        done = true;
        break;
      }
      if (!done) return std::nullopt;
    }
    return y;
  }

 private:
  static bool satisfied(const Constraint& c, double activity) {
    const double tol = 1e-7 * std::max(1.0, std::abs(c.rhs));
    switch (c.relation) {
      case Relation::less_equal: return activity <= c.rhs + tol;
      case Relation::greater_equal: return activity >= c.rhs - tol;
      case Relation::equal: return std::abs(activity - c.rhs) <= tol;
    }
    return false;
  }

  const MilpProblem& p_;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows_of_;
};

}  // namespace

Solution solve_milp(const MilpProblem& p, const SolveOptions& opts) {
  opts.validate();
  p.validate();
  const LpProblem& lp = p.base;
  const std::size_t n = lp.num_variables();
  const double sign = lp.sense == Sense::maximize ? -1.0 : 1.0;

  std::optional<Clock::time_point> deadline;
  if (opts.time_limit) {
    deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(*opts.time_limit));
  }

  const detail::SimplexEngine engine(lp);
  const SimpleRounding rounding(p);
  std::vector<double> root_lower(n), root_upper(n);
  for (std::size_t j = 0; j < n; ++j) {
    root_lower[j] = lp.variables[j].lower;
    root_upper[j] = lp.variables[j].upper;
    if (p.is_integral(j)) {
      root_lower[j] = std::ceil(root_lower[j] - opts.integrality_tol);
      root_upper[j] = std::floor(root_upper[j] + opts.integrality_tol);
    }
  }

  Solution best;
  best.status = SolveStatus::infeasible;
  double incumbent = kInf;  // minimisation form
  std::size_t lp_iterations = 0;
  std::size_t nodes = 0;

  std::priority_queue<Node, std::vector<Node>, WorseNode> open;
  std::size_t next_id = 0;
  open.push(Node{-kInf, -kInf, next_id++, {}, nullptr});
  double tie_quantum = 0.0;

  std::vector<double> lower(n), upper(n);
  bool limit_hit = false;
  bool lp_limit_hit = false;
  double open_bound = -kInf;

  // After branching, one child is explored straight away (a plunge) so that
  // incumbents show up early; the other waits in the best-bound queue.
  std::optional<Node> plunge;
  const auto within_gap = [&](double bound) {
    return bound >= incumbent - opts.rel_gap * std::max(1.0, std::abs(incumbent));
  };

  while (plunge || !open.empty()) {
    if (plunge && within_gap(plunge->bound)) plunge.reset();
    if (!plunge) {
      // Best-bound order: once the best open node is within the gap, so is every other.
      if (open.empty() || within_gap(open.top().bound)) break;
    }
    if (nodes >= opts.max_nodes || (deadline && Clock::now() > *deadline)) {
      limit_hit = true;
      open_bound = plunge ? plunge->bound : kInf;
      if (!open.empty()) open_bound = std::min(open_bound, open.top().bound);
      break;
    }
    Node node;
    if (plunge) {
      node = std::move(*plunge);
      plunge.reset();
    } else {
      node = open.top();
      open.pop();
    }
    ++nodes;

    lower = root_lower;
    upper = root_upper;
    for (const auto& c : node.changes) {
      lower[c.var] = std::max(lower[c.var], c.lower);
      upper[c.var] = std::min(upper[c.var], c.upper);
    }
    auto basis = std::make_shared<detail::Basis>();
    Solution relax = engine.solve(lower, upper, opts, deadline, node.basis.get(), basis.get());
    lp_iterations += relax.iterations;
    if (relax.status == SolveStatus::infeasible) continue;
    if (relax.status == SolveStatus::unbounded) {
      if (nodes == 1) {
        relax.status = SolveStatus::unbounded;
        relax.nodes = nodes;
        relax.duals.clear();
        return relax;
      }
      continue;
    }
    if (relax.status == SolveStatus::iteration_limit) {
      limit_hit = true;
      lp_limit_hit = true;
      open_bound = node.bound;
      if (!open.empty()) open_bound = std::min(open_bound, open.top().bound);
      break;
    }
    const double node_obj = sign * relax.objective;
    if (tie_quantum == 0.0) tie_quantum = 1e-9 * std::max(1.0, std::abs(node_obj));
    const double rank = std::floor(node_obj / tie_quantum);
    if (within_gap(node_obj)) continue;

    // Most fractional integral variable, lowest index on ties.
    std::size_t branch_var = n;
    double best_frac = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!p.is_integral(j)) continue;
      const double v = relax.values[j];
      const double frac = std::abs(v - std::round(v));
      if (frac <= opts.integrality_tol) continue;
      if (frac > best_frac + 1e-12) {
        best_frac = frac;
        branch_var = j;
      }
    }

    // Re-solves with the integral variables pinned at `ints` and keeps the
    // result if it beats the incumbent.
    const auto polish = [&](const std::vector<double>& ints, const Solution* fallback) {
      for (std::size_t j = 0; j < n; ++j) {
        if (p.is_integral(j)) lower[j] = upper[j] = ints[j];
      }
      Solution fixed = engine.solve(lower, upper, opts, deadline, basis.get());
      lp_iterations += fixed.iterations;
      if (fixed.status != SolveStatus::optimal) {
        if (!fallback) return;
        fixed = *fallback;
      }
      const double obj = sign * fixed.objective;
      if (obj < incumbent) {
        incumbent = obj;
        best = std::move(fixed);
      }
    };

    if (branch_var == n) {
      std::vector<double> ints(relax.values);
      for (auto& v : ints) v = std::round(v);
      polish(ints, &relax);
      continue;
    }

    if (auto rounded = rounding.round(relax.values, lower, upper, opts.integrality_tol)) {
      double estimate = sign * lp.objective_offset;
      for (std::size_t j = 0; j < n; ++j) estimate += sign * lp.objective[j] * (*rounded)[j];
      if (!within_gap(estimate)) polish(*rounded, nullptr);
    }

    const double v = relax.values[branch_var];
    Node down{node_obj, rank, next_id++, node.changes, basis};
    down.changes.push_back({branch_var, -kInf, std::floor(v)});
    Node up{node_obj, rank, next_id++, std::move(node.changes), basis};
    up.changes.push_back({branch_var, std::ceil(v), kInf});
    // Plunge toward the nearer integer.
    if (v - std::floor(v) >= 0.5) std::swap(up, down);
    open.push(std::move(up));
    plunge = std::move(down);
  }

  best.nodes = nodes;
  best.iterations = lp_iterations;
  best.duals.clear();
  if (!std::isfinite(incumbent)) {
    best.values.clear();
    best.status = lp_limit_hit ? SolveStatus::iteration_limit
                  : limit_hit  ? SolveStatus::gap_limit
                               : SolveStatus::infeasible;
    best.gap = kInf;
    return best;
  }
  if (limit_hit) {
    best.status = SolveStatus::gap_limit;
    best.gap = relative_gap(incumbent, std::min(open_bound, incumbent));
    return best;
  }
  best.status = SolveStatus::optimal;
  double remaining = plunge ? plunge->bound : kInf;
  if (!open.empty()) remaining = std::min(remaining, open.top().bound);
  best.gap = std::isfinite(remaining) ? relative_gap(incumbent, remaining) : 0.0;
  return best;
}

}  // namespace energyopt::milp
