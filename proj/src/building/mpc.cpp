#include "energyopt/building/mpc.hpp"

#include <cmath>
#include <random>

#include "energyopt/error.hpp"

namespace energyopt::building {

namespace {

using milp::Relation;
using milp::Term;

HvacSpec slice(const HvacSpec& hvac, std::size_t from, std::size_t to) {
  HvacSpec out = hvac;
  if (!hvac.allowed.empty()) out.allowed.assign(hvac.allowed.begin() + from, hvac.allowed.begin() + to);
  return out;
}

ComfortSpec slice(const ComfortSpec& c, std::size_t from, std::size_t to) {
  return {c.target.slice(from, to), {c.occupied.begin() + from, c.occupied.begin() + to}, c.band};
}

void check_coverage(const HvacSpec& hvac, const ComfortSpec& comfort, std::size_t steps, const char* what) {
  if (comfort.target.size() < steps) {
    throw ValidationError(std::string(what) + ": comfort target covers " + std::to_string(comfort.target.size()) +
                          " of " + std::to_string(steps) + " steps");
  }
  if (!hvac.allowed.empty() && hvac.allowed.size() < steps) {
    throw ValidationError(std::string(what) + ": HVAC availability mask covers " +
                          std::to_string(hvac.allowed.size()) + " of " + std::to_string(steps) + " steps");
  }
}

// Objective of a realised schedule, in the same units as the horizon LP.
double weighted_objective(const BuildingSchedule& s, const HvacSpec& hvac, const ComfortSpec& comfort,
                          const ObjectiveWeights& w, const ScenarioInputs& inputs) {
  const double dt = inputs.step_hours();
  double total = 0.0;
  for (std::size_t t = 0; t < s.q_hvac.size(); ++t) {
    const double rate = w.cost * inputs.price[t] + w.carbon * inputs.carbon[t];
    total += rate * (s.q_hvac[t] / hvac.cop_heat + s.q_cool[t] / hvac.cop_cool) * dt;
    if (comfort.occupied[t]) total += w.comfort * std::abs(s.t_int[t] - comfort.target[t]);
  }
  return total;
}

}  // namespace

milp::LpProblem build_horizon_lp(const RcModelParams& params, const HvacSpec& hvac, const ComfortSpec& comfort,
                                 const ObjectiveWeights& weights, const ScenarioInputs& inputs, double t_int0) {
  params.validate();
  hvac.validate();
  comfort.validate();
  weights.validate();
  inputs.validate();
  if (!std::isfinite(t_int0)) throw ValidationError("optimise_horizon: initial temperature must be finite");
  const std::size_t n = inputs.size();
  check_coverage(hvac, comfort, n, "optimise_horizon");

  const double dt = inputs.step_hours();
  const double a = 1.0 - dt / (params.R * params.C);
  const double b = dt / params.C;
  const bool cooling = hvac.q_cool_max > 0.0;

  milp::LpProblem lp;
  std::vector<std::size_t> heat(n), cool(n), temp(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double rate = weights.cost * inputs.price[t] + weights.carbon * inputs.carbon[t];
    heat[t] = lp.add_variable("Q[" + std::to_string(t) + "]", 0.0, hvac.heat_limit(t), rate * dt / hvac.cop_heat);
    if (cooling) {
      cool[t] = lp.add_variable("Qc[" + std::to_string(t) + "]", 0.0, hvac.cool_limit(t), rate * dt / hvac.cop_cool);
    }
  }
  for (std::size_t t = 0; t < n; ++t) temp[t] = lp.add_variable("T[" + std::to_string(t) + "]", -milp::kInf, milp::kInf);

  for (std::size_t t = 0; t < n; ++t) {
    std::vector<Term> row{{temp[t], 1.0}, {heat[t], -b}};
    if (cooling) row.push_back({cool[t], b});
    double rhs = b * (inputs.t_ext[t] / params.R + params.p * inputs.irradiance[t]);
    if (t == 0) {
      rhs += a * t_int0;
    } else {
      row.push_back({temp[t - 1], -a});
    }
    lp.add_constraint("rc[" + std::to_string(t) + "]", std::move(row), Relation::equal, rhs);
  }
  if (weights.comfort > 0.0) {
    for (std::size_t t = 0; t < n; ++t) {
      if (!comfort.occupied[t]) continue;
      const auto d = lp.add_variable("d[" + std::to_string(t) + "]", 0.0, milp::kInf, weights.comfort);
      const double target = comfort.target[t];
      lp.add_constraint("dev_hi[" + std::to_string(t) + "]", {{d, 1.0}, {temp[t], -1.0}}, Relation::greater_equal,
                        -target);
      lp.add_constraint("dev_lo[" + std::to_string(t) + "]", {{d, 1.0}, {temp[t], 1.0}}, Relation::greater_equal,
                        target);
    }
  }
  return lp;
}

BuildingSchedule optimise_horizon(const RcModelParams& params, const HvacSpec& hvac, const ComfortSpec& comfort,
                                  const ObjectiveWeights& weights, const ScenarioInputs& inputs, double t_int0,
                                  const milp::SolveOptions& opts) {
  const auto lp = build_horizon_lp(params, hvac, comfort, weights, inputs, t_int0);
  const auto sol = milp::solve_lp(lp, opts);
  if (!sol.has_values()) {
    const std::string msg = "optimise_horizon: LP solver returned " + milp::to_string(sol.status);
    if (sol.status == milp::SolveStatus::infeasible) throw InfeasibleError(msg);
    throw SolverLimitError(msg);
  }
  const std::size_t n = inputs.size();
  const bool cooling = hvac.q_cool_max > 0.0;
  std::vector<double> heat(n), cool(n, 0.0), temp(n);
  const std::size_t stride = cooling ? 2 : 1;
  for (std::size_t t = 0; t < n; ++t) {
    heat[t] = std::clamp(sol.values[stride * t], 0.0, hvac.heat_limit(t));
    if (cooling) cool[t] = std::clamp(sol.values[stride * t + 1], 0.0, hvac.cool_limit(t));
    temp[t] = sol.values[stride * n + t];
  }
  BuildingSchedule s;
  const auto start = inputs.t_ext.start;
  const auto res = inputs.t_ext.resolution;
  s.q_hvac = TimeSeries(start, res, std::move(heat), "kW");
  s.q_cool = TimeSeries(start, res, std::move(cool), "kW");
  s.t_int = TimeSeries(start, res, std::move(temp), "degC");
  s.status = sol.status;
  evaluate(s, hvac, slice(comfort, 0, n), inputs);
  s.objective = sol.objective;
  return s;
}

BuildingSchedule rolling_mpc(const RcModelParams& plant, const RcModelParams& controller, const HvacSpec& hvac,
                             const ComfortSpec& comfort, const ObjectiveWeights& weights, const ScenarioInputs& inputs,
                             double t_int0, const RollingOptions& opts, const milp::SolveOptions& solver) {
  plant.validate();
  controller.validate();
  inputs.validate();
  const std::size_t total = opts.total_steps;
  if (total == 0 || total > inputs.size()) {
    throw ValidationError("rolling_mpc: total_steps must be in [1, " + std::to_string(inputs.size()) + "]");
  }
  if (opts.horizon == 0 || opts.horizon > total) throw ValidationError("rolling_mpc: horizon must be in [1, total_steps]");
  if (!(opts.measurement_sd >= 0.0) || !(opts.process_sd >= 0.0)) {
    throw ValidationError("rolling_mpc: noise levels must be >= 0");
  }
  check_coverage(hvac, comfort, total, "rolling_mpc");

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double r = opts.kalman_measurement_var > 0.0
                       ? opts.kalman_measurement_var
                       : std::max(opts.measurement_sd * opts.measurement_sd, 1e-6);
  const double q_var =
      opts.kalman_process_var > 0.0 ? opts.kalman_process_var : std::max(opts.process_sd * opts.process_sd, 1e-2);

  const double dt = inputs.step_hours();
  std::vector<double> heat(total), cool(total), temp(total);
  double x = t_int0;
  GaussianEstimate est{t_int0, r};
  for (std::size_t t = 0; t < total; ++t) {
    if (opts.feedback == Feedback::kalman) {
      const double z = x + (opts.measurement_sd > 0.0 ? opts.measurement_sd * normal(rng) : 0.0);
      est = kalman_update(est, z, r);
    }
    const std::size_t h = std::min(opts.horizon, total - t);
    const auto plan = optimise_horizon(controller, slice(hvac, t, t + h), slice(comfort, t, t + h), weights,
                                       inputs.slice(t, t + h), est.mean, solver);
    heat[t] = plan.q_hvac[0];
    cool[t] = plan.q_cool[0];
    const double q = heat[t] - cool[t];
    x = rc_step(x, inputs.t_ext[t], q, inputs.irradiance[t], plant, dt);
    if (opts.process_sd > 0.0) x += opts.process_sd * normal(rng);
    temp[t] = x;
    est = kalman_predict(est, inputs.t_ext[t], q, inputs.irradiance[t], controller, dt, q_var);
  }

  BuildingSchedule s;
  const auto start = inputs.t_ext.start;
  const auto res = inputs.t_ext.resolution;
  s.q_hvac = TimeSeries(start, res, std::move(heat), "kW");
  s.q_cool = TimeSeries(start, res, std::move(cool), "kW");
  s.t_int = TimeSeries(start, res, std::move(temp), "degC");
  const auto window = slice(comfort, 0, total);
  const auto in = inputs.slice(0, total);
  evaluate(s, hvac, window, in);
  s.objective = weighted_objective(s, hvac, window, weights, in);
  return s;
}

std::vector<std::size_t> non_dominated(const std::vector<ParetoPoint>& points) {
  const auto same = [](const ParetoPoint& a, const ParetoPoint& b) {
    return a.cost == b.cost && a.carbon == b.carbon && a.comfort == b.comfort;
  };
  const auto dominates = [](const ParetoPoint& a, const ParetoPoint& b) {
    const bool no_worse = a.cost <= b.cost && a.carbon <= b.carbon && a.comfort >= b.comfort;
    const bool better = a.cost < b.cost || a.carbon < b.carbon || a.comfort > b.comfort;
    return no_worse && better;
  };
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < points.size() && keep; ++j) {
      if (j == i) continue;
      if (dominates(points[j], points[i]) || (j < i && same(points[j], points[i]))) keep = false;
    }
    if (keep) front.push_back(i);
  }
  return front;
}

std::vector<ObjectiveWeights> default_weight_grid() {
  std::vector<ObjectiveWeights> grid;
  for (double carbon : {0.0, 1e-3}) {
    for (double comfort : {1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.3, 1.0, 1e3}) grid.push_back({1.0, carbon, comfort});
  }
  return grid;
}

ParetoResult pareto_sweep(const std::vector<ObjectiveWeights>& grid, const RcModelParams& params,
                          const HvacSpec& hvac, const ComfortSpec& comfort, const ScenarioInputs& inputs,
                          double t_int0, const milp::SolveOptions& opts) {
  if (grid.empty()) throw ValidationError("pareto_sweep: empty weight grid");
  for (const auto& w : grid) w.validate();
  ParetoResult out;
  for (const auto& w : grid) {
    const auto s = optimise_horizon(params, hvac, comfort, w, inputs, t_int0, opts);
    out.points.push_back({w, s.cost, s.carbon, s.comfort_criterion});
  }
  out.front = non_dominated(out.points);
  return out;
}

nlohmann::json to_json(const ObjectiveWeights& w) {
  return {{"w_cost", w.cost}, {"w_carbon", w.carbon}, {"w_comfort", w.comfort}};
}

nlohmann::json to_json(const ParetoPoint& p) {
  return {{"weights", to_json(p.weights)}, {"cost", p.cost}, {"carbon", p.carbon}, {"comfort_criterion", p.comfort}};
}

}  // namespace energyopt::building
