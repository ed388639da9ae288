#include "simplex.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "energyopt/error.hpp"
#include "energyopt/milp/solver.hpp"

namespace energyopt::milp::detail {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kDegenerateStep = 1e-12;
constexpr std::size_t kMaxEtas = 64;
constexpr std::size_t kStallLimit = 50;

enum class RunStatus { optimal, unbounded, infeasible, iteration_limit, numerical };

// LU factors of the basis at the last refactorisation plus a product-form
// eta file for the pivots since.
class BasisFactor {
 public:
  bool factor(Eigen::Index m, const std::vector<Eigen::Triplet<double>>& entries) {
    etas_.clear();
    m_ = m;
    if (m == 0) return true;
    Eigen::SparseMatrix<double> b(m, m);
    b.setFromTriplets(entries.begin(), entries.end());
    b.makeCompressed();
    lu_.analyzePattern(b);
    lu_.factorize(b);
    if (lu_.info() != Eigen::Success) return false;
    // SparseLU accepts some numerically singular matrices; check a solve.
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
    const Eigen::VectorXd x = lu_.solve(ones);
    return x.allFinite() && (b * x - ones).lpNorm<Eigen::Infinity>() <= 1e-7 * (1.0 + x.lpNorm<Eigen::Infinity>());
  }

  // v <- B^{-1} v
  void ftran(Eigen::VectorXd& v) const {
    if (m_ == 0) return;
    Eigen::VectorXd w = lu_.solve(v);
    for (const auto& eta : etas_) {
      const double wr = w(eta.row) / eta.pivot;
      w(eta.row) = wr;
      if (wr == 0.0) continue;
      for (const auto& [i, a] : eta.entries) w(i) -= a * wr;
    }
    v.swap(w);
  }

  // v <- B^{-T} v
  void btran(Eigen::VectorXd& v) {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v(it->row);
      for (const auto& [i, a] : it->entries) s -= a * v(i);
      v(it->row) = s / it->pivot;
    }
    Eigen::VectorXd w = lu_.transpose().solve(v);
    v.swap(w);
  }

  void push(Eigen::Index row, const Eigen::VectorXd& alpha) {
    Eta eta{row, alpha(row), {}};
    for (Eigen::Index i = 0; i < alpha.size(); ++i) {
      if (i != row && std::abs(alpha(i)) > 1e-14) eta.entries.emplace_back(i, alpha(i));
    }
    etas_.push_back(std::move(eta));
  }

  std::size_t updates() const { return etas_.size(); }

 private:
  struct Eta {
    Eigen::Index row;
    double pivot;
    std::vector<std::pair<Eigen::Index, double>> entries;
  };
  Eigen::Index m_ = 0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
};

}  // namespace

SimplexEngine::SimplexEngine(const LpProblem& p) : problem_(p) {
  p.validate();
  cols_ = p.num_variables();
  std::vector<std::vector<std::pair<std::size_t, double>>> columns(cols_);
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    std::vector<Term> terms = c.terms;
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    for (const auto& t : terms) {
      if (!merged.empty() && merged.back().var == t.var) {
        merged.back().coef += t.coef;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    if (merged.empty()) {
      const bool ok = (c.relation == Relation::less_equal && c.rhs >= -1e-12) ||
                      (c.relation == Relation::greater_equal && c.rhs <= 1e-12) ||
                      (c.relation == Relation::equal && std::abs(c.rhs) <= 1e-12);
      if (!ok) empty_row_infeasible_ = true;
      continue;
    }
    double max_abs = 0.0;
    for (const auto& t : merged) max_abs = std::max(max_abs, std::abs(t.coef));
    const double scale = 1.0 / max_abs;
    const std::size_t r = rows_++;
    row_origin_.push_back(i);
    relation_.push_back(c.relation);
    rhs_.push_back(c.rhs * scale);
    row_scale_.push_back(scale);
    for (const auto& t : merged) columns[t.var].emplace_back(r, t.coef * scale);
  }
  col_start_.reserve(cols_ + 1);
  col_start_.push_back(0);
  for (const auto& col : columns) {
    for (const auto& [r, v] : col) {
      row_index_.push_back(r);
      value_.push_back(v);
    }
    col_start_.push_back(row_index_.size());
  }
  cost_ = p.objective;
  if (p.sense == Sense::maximize) {
    for (auto& c : cost_) c = -c;
  }
}

// State of a single solve. Column numbering: [0, n) structural, [n, n+m)
// row slacks, [n+m, n+2m) phase-one artificials.
class SimplexRun {
 public:
  SimplexRun(const SimplexEngine& e, const std::vector<double>& lower, const std::vector<double>& upper,
             const SolveOptions& opts, std::optional<Clock::time_point> deadline)
      : e_(e), lower_(lower), upper_(upper), opts_(opts), deadline_(deadline), n_(e.cols_), m_(e.rows_),
        total_(n_ + 2 * m_) {}

  Solution run(const Basis* warm, Basis* final_basis) {
    Solution sol;
    for (std::size_t j = 0; j < n_; ++j) {
      if (lower_[j] > upper_[j]) {
        sol.status = SolveStatus::infeasible;
        return sol;
      }
    }
    if (e_.empty_row_infeasible_) {
      sol.status = SolveStatus::infeasible;
      return sol;
    }
    if (warm && !warm->empty()) {
      reset();
      const RunStatus st = run_warm(*warm);
      if (st != RunStatus::numerical) return finish(st, final_basis);
    }
    reset();
    return finish(run_cold(), final_basis);
  }

 private:
  void reset() {
    lo_.assign(total_, 0.0);
    hi_.assign(total_, 0.0);
    x_.assign(total_, 0.0);
    pos_.assign(total_, -1);
    head_.assign(m_, 0);
    art_sign_.assign(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lower_[j];
      hi_[j] = upper_[j];
      x_[j] = resting_value(j, false);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t s = n_ + i;
      switch (e_.relation_[i]) {
        case Relation::less_equal: lo_[s] = 0.0; hi_[s] = kInf; break;
        case Relation::greater_equal: lo_[s] = -kInf; hi_[s] = 0.0; break;
        case Relation::equal: lo_[s] = 0.0; hi_[s] = 0.0; break;
      }
    }
    stalled_ = 0;
    bland_ = false;
  }

  double resting_value(std::size_t j, bool prefer_upper) const {
    if (prefer_upper && std::isfinite(hi_[j])) return hi_[j];
    if (std::isfinite(lo_[j])) return lo_[j];
    if (std::isfinite(hi_[j])) return hi_[j];
    return 0.0;
  }

  void use_structural_costs() {
    phase_cost_.assign(total_, 0.0);
    double max_cost = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      phase_cost_[j] = e_.cost_[j];
      max_cost = std::max(max_cost, std::abs(e_.cost_[j]));
    }
    dual_tol_ = 1e-9 * (1.0 + max_cost);
  }

  RunStatus run_cold() {
    // Initial basis: slacks where the row residual fits their bounds,
    // artificials elsewhere.
    std::vector<double> residual(e_.rhs_);
    for (std::size_t j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      for (std::size_t k = e_.col_start_[j]; k < e_.col_start_[j + 1]; ++k) {
        residual[e_.row_index_[k]] -= e_.value_[k] * x_[j];
      }
    }
    bool need_phase_one = false;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t s = n_ + i;
      const double r = residual[i];
      if (r >= lo_[s] - opts_.feasibility_tol * 1e-3 && r <= hi_[s] + opts_.feasibility_tol * 1e-3) {
        set_basic(i, s, std::clamp(r, lo_[s], hi_[s]));
        continue;
      }
      const double bound = r < lo_[s] ? lo_[s] : hi_[s];
      x_[s] = bound;
      const std::size_t a = n_ + m_ + i;
      art_sign_[i] = r > bound ? 1.0 : -1.0;
      hi_[a] = kInf;
      set_basic(i, a, std::abs(r - bound));
      need_phase_one = true;
    }
    if (!refactor()) return RunStatus::numerical;

    if (need_phase_one) {
      phase_cost_.assign(total_, 0.0);
      for (std::size_t i = 0; i < m_; ++i) {
        if (art_sign_[i] != 0.0) phase_cost_[n_ + m_ + i] = 1.0;
      }
      dual_tol_ = 1e-9;
      const RunStatus st = primal();
      if (st != RunStatus::optimal) return st;
      if (!refactor()) return RunStatus::numerical;
      double infeasibility = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        if (art_sign_[i] != 0.0) infeasibility = std::max(infeasibility, x_[n_ + m_ + i]);
      }
      if (infeasibility > opts_.feasibility_tol) return RunStatus::infeasible;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t a = n_ + m_ + i;
        hi_[a] = 0.0;
        if (pos_[a] < 0) x_[a] = 0.0;
      }
    }
    use_structural_costs();
    stalled_ = 0;
    bland_ = false;
    return primal();
  }

  RunStatus run_warm(const Basis& b) {
    if (b.head.size() != m_ || b.at_upper.size() != n_ + m_ || b.art_sign.size() != m_) return RunStatus::numerical;
    art_sign_ = b.art_sign;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t j = b.head[i];
      if (j >= total_ || pos_[j] >= 0) return RunStatus::numerical;
      if (j >= n_ + m_ && art_sign_[j - n_ - m_] == 0.0) return RunStatus::numerical;
      head_[i] = j;
      pos_[j] = static_cast<std::ptrdiff_t>(i);
    }
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (pos_[j] < 0) x_[j] = resting_value(j, b.at_upper[j] != 0);
    }
    if (!refactor()) return RunStatus::numerical;
    use_structural_costs();
    if (!primal_feasible()) {
      if (!make_dual_feasible()) return RunStatus::numerical;
      const RunStatus st = dual();
      if (st != RunStatus::optimal) return st == RunStatus::infeasible ? st : RunStatus::numerical;
    }
    const RunStatus st = primal();
    return st == RunStatus::iteration_limit && !timed_out() ? RunStatus::numerical : st;
  }

  Solution finish(RunStatus st, Basis* final_basis) {
    Solution sol;
    sol.iterations = total_iterations_;
    switch (st) {
      case RunStatus::infeasible: sol.status = SolveStatus::infeasible; return sol;
      case RunStatus::iteration_limit:
      case RunStatus::numerical: sol.status = SolveStatus::iteration_limit; return sol;
      default: break;
    }
    if (!refactor()) {
      sol.status = SolveStatus::iteration_limit;
      return sol;
    }
    sol.values.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    sol.objective = e_.problem_.evaluate_objective(sol.values);
    if (st == RunStatus::unbounded) {
      sol.status = SolveStatus::unbounded;
      sol.objective = e_.problem_.sense == Sense::minimize ? -kInf : kInf;
      return sol;
    }
    sol.status = SolveStatus::optimal;

    const Eigen::VectorXd y = duals();
    const double sign = e_.problem_.sense == Sense::maximize ? -1.0 : 1.0;
    sol.duals.assign(e_.problem_.num_constraints(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      sol.duals[e_.row_origin_[r]] = sign * y(static_cast<Eigen::Index>(r)) * e_.row_scale_[r];
    }
    if (final_basis) {
      final_basis->head = head_;
      final_basis->art_sign = art_sign_;
      final_basis->at_upper.assign(n_ + m_, 0);
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        final_basis->at_upper[j] = pos_[j] < 0 && std::isfinite(hi_[j]) && x_[j] >= hi_[j] && lo_[j] < hi_[j];
      }
    }
    return sol;
  }

  void set_basic(std::size_t row, std::size_t col, double value) {
    head_[row] = col;
    pos_[col] = static_cast<std::ptrdiff_t>(row);
    x_[col] = value;
  }

  template <class F>
  void for_column(std::size_t j, F f) const {
    if (j < n_) {
      for (std::size_t k = e_.col_start_[j]; k < e_.col_start_[j + 1]; ++k) f(e_.row_index_[k], e_.value_[k]);
    } else if (j < n_ + m_) {
      f(j - n_, 1.0);
    } else {
      f(j - n_ - m_, art_sign_[j - n_ - m_]);
    }
  }

  double column_dot(const Eigen::VectorXd& y, std::size_t j) const {
    double s = 0.0;
    for_column(j, [&](std::size_t r, double v) { s += v * y(static_cast<Eigen::Index>(r)); });
    return s;
  }

  // alpha = B^{-1} A_j
  void ftran_column(std::size_t j, Eigen::VectorXd& alpha) const {
    alpha.setZero(static_cast<Eigen::Index>(m_));
    for_column(j, [&](std::size_t r, double v) { alpha(static_cast<Eigen::Index>(r)) += v; });
    factor_.ftran(alpha);
  }

  Eigen::VectorXd duals() {
    Eigen::VectorXd y(static_cast<Eigen::Index>(m_));
    for (std::size_t i = 0; i < m_; ++i) y(static_cast<Eigen::Index>(i)) = phase_cost_[head_[i]];
    factor_.btran(y);
    return y;
  }

  // Refactorises the basis and recomputes the basic values from scratch.
  bool refactor() {
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t i = 0; i < m_; ++i) {
      for_column(head_[i], [&](std::size_t r, double v) {
        entries.emplace_back(static_cast<int>(r), static_cast<int>(i), v);
      });
    }
    if (!factor_.factor(static_cast<Eigen::Index>(m_), entries)) return false;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(m_));
    for (std::size_t i = 0; i < m_; ++i) rhs(static_cast<Eigen::Index>(i)) = e_.rhs_[i];
    for (std::size_t j = 0; j < total_; ++j) {
      if (pos_[j] >= 0 || x_[j] == 0.0) continue;
      for_column(j, [&](std::size_t r, double v) { rhs(static_cast<Eigen::Index>(r)) -= v * x_[j]; });
    }
    factor_.ftran(rhs);
    for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] = rhs(static_cast<Eigen::Index>(i));
    return true;
  }

  bool timed_out() const { return deadline_ && Clock::now() > *deadline_; }

  bool out_of_budget() {
    if (total_iterations_ >= opts_.max_lp_iterations) return true;
    return total_iterations_ % 64 == 0 && timed_out();
  }

  bool primal_feasible() const {
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t b = head_[i];
      if (x_[b] < lo_[b] - opts_.feasibility_tol || x_[b] > hi_[b] + opts_.feasibility_tol) return false;
    }
    return true;
  }

  // Moves boxed nonbasic columns to the bound their reduced cost prefers.
  bool make_dual_feasible() {
    const Eigen::VectorXd y = duals();
    const double tol = 10.0 * dual_tol_;
    bool moved = false;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
      const double d = phase_cost_[j] - column_dot(y, j);
      const bool at_lower = std::isfinite(lo_[j]) && x_[j] <= lo_[j];
      const bool at_upper = std::isfinite(hi_[j]) && x_[j] >= hi_[j];
      if (at_lower && d < -tol) {
        if (!std::isfinite(hi_[j])) return false;
        x_[j] = hi_[j];
        moved = true;
      } else if (at_upper && d > tol) {
        if (!std::isfinite(lo_[j])) return false;
        x_[j] = lo_[j];
        moved = true;
      } else if (!at_lower && !at_upper && std::abs(d) > tol) {
        return false;
      }
    }
    return !moved || refactor();
  }

  void pivot(std::size_t r, std::size_t entering, const Eigen::VectorXd& alpha, double leaving_value) {
    const std::size_t leaving = head_[r];
    x_[leaving] = leaving_value;
    pos_[leaving] = -1;
    set_basic(r, entering, x_[entering]);
    factor_.push(static_cast<Eigen::Index>(r), alpha);
  }

  RunStatus primal() {
    Eigen::VectorXd alpha(static_cast<Eigen::Index>(m_));
    while (true) {
      if (out_of_budget()) return RunStatus::iteration_limit;
      if (factor_.updates() >= kMaxEtas && !refactor()) return RunStatus::numerical;

      const Eigen::VectorXd y = duals();

      // Pricing.
      std::size_t entering = total_;
      double direction = 0.0;
      double best = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
        const double d = phase_cost_[j] - column_dot(y, j);
        const bool at_lower = x_[j] <= lo_[j];
        const bool at_upper = x_[j] >= hi_[j];
        double dir = 0.0;
        if (d < -dual_tol_ && !at_upper) dir = 1.0;
        if (d > dual_tol_ && !at_lower) dir = -1.0;
        if (dir == 0.0) continue;
        if (bland_) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          direction = dir;
        }
      }
      if (entering == total_) return RunStatus::optimal;

      ftran_column(entering, alpha);

      // Ratio test: basic i moves at rate delta_i per unit step.
      double theta = kInf;
      std::ptrdiff_t leave = -1;
      bool leave_to_upper = false;
      double leave_pivot = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double delta = -direction * alpha(static_cast<Eigen::Index>(i));
        const std::size_t b = head_[i];
        double t = kInf;
        bool to_upper = false;
        if (delta < -kPivotTol && std::isfinite(lo_[b])) {
          t = (x_[b] - lo_[b]) / -delta;
        } else if (delta > kPivotTol && std::isfinite(hi_[b])) {
          t = (hi_[b] - x_[b]) / delta;
          to_upper = true;
        }
        if (!std::isfinite(t)) continue;
        t = std::max(t, 0.0);
        bool take = false;
        if (t < theta - 1e-12) {
          take = true;
        } else if (t <= theta + 1e-12 && leave >= 0) {
          take = bland_ ? b < head_[static_cast<std::size_t>(leave)] : std::abs(delta) > leave_pivot;
        }
        if (take) {
          theta = t;
          leave = static_cast<std::ptrdiff_t>(i);
          leave_to_upper = to_upper;
          leave_pivot = std::abs(delta);
        }
      }
      const double span = hi_[entering] - lo_[entering];
      const bool flip = std::isfinite(span) && span <= theta;
      if (flip) theta = span;
      if (!std::isfinite(theta)) return RunStatus::unbounded;

      ++total_iterations_;
      if (theta <= kDegenerateStep) {
        if (++stalled_ > kStallLimit) bland_ = true;
      } else {
        stalled_ = 0;
        bland_ = false;
      }

      for (std::size_t i = 0; i < m_; ++i) {
        x_[head_[i]] -= direction * alpha(static_cast<Eigen::Index>(i)) * theta;
      }
      if (flip) {
        x_[entering] = direction > 0 ? hi_[entering] : lo_[entering];
        continue;
      }
      x_[entering] += direction * theta;
      const auto r = static_cast<std::size_t>(leave);
      const std::size_t leaving = head_[r];
      pivot(r, entering, alpha, leave_to_upper ? hi_[leaving] : lo_[leaving]);
    }
  }

  // Dual simplex from a dual feasible basis; ends primal feasible.
  RunStatus dual() {
    Eigen::VectorXd alpha(static_cast<Eigen::Index>(m_));
    Eigen::VectorXd rho(static_cast<Eigen::Index>(m_));
    struct Candidate {
      std::size_t j;
      double ratio;
      double size;
    };
    std::vector<Candidate> candidates;
    while (true) {
      if (out_of_budget()) return RunStatus::iteration_limit;
      if (factor_.updates() >= kMaxEtas && !refactor()) return RunStatus::numerical;

      // Leaving row: largest bound violation.
      std::size_t r = m_;
      double worst = opts_.feasibility_tol;
      bool raise = false;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t b = head_[i];
        if (lo_[b] - x_[b] > worst) {
          worst = lo_[b] - x_[b];
          r = i;
          raise = true;
        } else if (x_[b] - hi_[b] > worst) {
          worst = x_[b] - hi_[b];
          r = i;
          raise = false;
        }
      }
      if (r == m_) return RunStatus::optimal;

      const Eigen::VectorXd y = duals();
      rho.setZero();
      rho(static_cast<Eigen::Index>(r)) = 1.0;
      factor_.btran(rho);

      // x_r changes by -a_j * step_j when nonbasic j moves; pick columns that
      // push it toward the violated bound, then a two-pass ratio test.
      const double sigma = raise ? 1.0 : -1.0;
      candidates.clear();
      double theta_max = kInf;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
        const double a = column_dot(rho, j);
        if (std::abs(a) <= kPivotTol) continue;
        const bool can_up = x_[j] < hi_[j];
        const bool can_down = x_[j] > lo_[j];
        const double d = phase_cost_[j] - column_dot(y, j);
        double slack;
        if (-sigma * a > 0.0 && can_up) {
          slack = std::max(d, 0.0);
        } else if (sigma * a > 0.0 && can_down) {
          slack = std::max(-d, 0.0);
        } else {
          continue;
        }
        candidates.push_back({j, slack / std::abs(a), std::abs(a)});
        theta_max = std::min(theta_max, (slack + dual_tol_) / std::abs(a));
      }
      if (candidates.empty()) return RunStatus::infeasible;
      const Candidate* pick = nullptr;
      for (const auto& c : candidates) {
        if (c.ratio > theta_max) continue;
        if (!pick || c.size > pick->size) pick = &c;
      }
      const std::size_t entering = pick->j;

      ftran_column(entering, alpha);
      const double pivot_value = alpha(static_cast<Eigen::Index>(r));
      if (std::abs(pivot_value) <= kPivotTol) {
        if (!refactor()) return RunStatus::numerical;
        continue;
      }
      const std::size_t leaving = head_[r];
      const double target = raise ? lo_[leaving] : hi_[leaving];
      const double step = (x_[leaving] - target) / pivot_value;
      for (std::size_t i = 0; i < m_; ++i) x_[head_[i]] -= step * alpha(static_cast<Eigen::Index>(i));
      x_[entering] += step;
      ++total_iterations_;
      pivot(r, entering, alpha, target);
    }
  }

  const SimplexEngine& e_;
  const std::vector<double>& lower_;
  const std::vector<double>& upper_;
  const SolveOptions& opts_;
  std::optional<Clock::time_point> deadline_;
  std::size_t n_;
  std::size_t m_;
  std::size_t total_;
  std::vector<double> lo_, hi_, x_;
  std::vector<std::ptrdiff_t> pos_;
  std::vector<std::size_t> head_;
  std::vector<double> art_sign_;
  std::vector<double> phase_cost_;
  BasisFactor factor_;
  double dual_tol_ = 1e-9;
  std::size_t total_iterations_ = 0;
  std::size_t stalled_ = 0;
  bool bland_ = false;
};

Solution SimplexEngine::solve(const std::vector<double>& lower, const std::vector<double>& upper,
                              const SolveOptions& opts, std::optional<Clock::time_point> deadline, const Basis* warm,
                              Basis* final_basis) const {
  SimplexRun run(*this, lower, upper, opts, deadline);
  return run.run(warm, final_basis);
}

Solution SimplexEngine::solve(const SolveOptions& opts) const {
  std::vector<double> lower(cols_), upper(cols_);
  for (std::size_t j = 0; j < cols_; ++j) {
    lower[j] = problem_.variables[j].lower;
    upper[j] = problem_.variables[j].upper;
  }
  std::optional<Clock::time_point> deadline;
  if (opts.time_limit) {
    deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(*opts.time_limit));
  }
  return solve(lower, upper, opts, deadline);
}

}  // namespace energyopt::milp::detail

namespace energyopt::milp {

Solution solve_lp(const LpProblem& p, const SolveOptions& opts) {
  opts.validate();
  const detail::SimplexEngine engine(p);
  return engine.solve(opts);
}

}  // namespace energyopt::milp
