#include <cmath>

#include "config.hpp"
#include "energyopt/building/kalman.hpp"
#include "energyopt/building/mpc.hpp"
#include "energyopt/timeseries/csv.hpp"

namespace energyopt::cli {

namespace {

using building::BuildingSchedule;
using building::ComfortSpec;
using building::HvacSpec;
using building::RcModelParams;
using building::ScenarioInputs;

RcModelParams read_params(Section& s) {
  RcModelParams p;
  p.R = s.number("R");
  p.C = s.number("C");
  p.p = s.number("p", 0.0);
  return p;
}

struct BuildingSetup {
  RcModelParams params;
  HvacSpec hvac;
  ComfortSpec comfort;
  ScenarioInputs inputs;
  double t_int0 = 20.0;
};

// Shared by mpc and pareto: the scenario CSV plus model, HVAC and comfort.
BuildingSetup read_building(Context& ctx) {
  auto& sec = ctx.root().child("building");
  const auto table = ctx.series(sec, "scenario");
  const std::string file = ctx.inputs().back().name;
  BuildingSetup b;
  b.params = read_params(sec.child("model"));
  auto& hvac = sec.child("hvac");
  b.hvac.q_max = hvac.number("q_max");
  b.hvac.cop_heat = hvac.number("cop_heat", 1.0);
  b.hvac.q_cool_max = hvac.number("q_cool_max", 0.0);
  b.hvac.cop_cool = hvac.number("cop_cool", 1.0);
  b.inputs = {require_column(table, "t_ext", file, "degC"), require_column(table, "irradiance", file, "W/m2"),
              require_column(table, "price", file, "per kWh"), require_column(table, "carbon", file, "gCO2/kWh")};
  b.comfort.target = require_column(table, "target", file, "degC");
  const auto occupied = require_column(table, "occupied", file);
  for (double v : occupied.values) {
    if (v != 0.0 && v != 1.0) throw ConfigError(file + ": occupied must be 0 or 1");
    b.comfort.occupied.push_back(v == 1.0);
  }
  if (table.contains("hvac_available")) {
    for (double v : table.at("hvac_available").values) b.hvac.allowed.push_back(v != 0.0);
  }
  b.comfort.band = sec.number("comfort_band", 1.0);
  b.t_int0 = sec.number("t_int0");
  try {
    b.params.validate();
    b.hvac.validate();
    b.comfort.validate();
    b.inputs.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("building: ") + e.what());
  }
  return b;
}

milp::SolveOptions solver(Context& ctx) {
  if (!ctx.root().has("solver")) return {};
  return solve_options(ctx.root().child("solver"));
}

json summary(const BuildingSchedule& s) {
  return {{"cost", s.cost}, {"carbon", s.carbon}, {"comfort_criterion", s.comfort_criterion}};
}

ts::TimeSeries like(const ts::TimeSeries& grid, std::vector<double> values, const std::string& unit) {
  return ts::TimeSeries(grid.start, grid.resolution, std::move(values), unit);
}

}  // namespace

void run_fit_building(Context& ctx) {
  auto& sec = ctx.root().child("fit_building");
  const auto table = ctx.series(sec, "history");
  const std::string file = ctx.inputs().back().name;
  building::FitData data{require_column(table, "t_int", file, "degC"), require_column(table, "t_ext", file, "degC"),
                         require_column(table, "irradiance", file, "W/m2"), require_column(table, "q_hvac", file, "kW")};
  auto& kf = sec.child("kalman");
  building::KalmanOptions kopts;
  kopts.process_var = kf.number("process_var", 0.01);
  kopts.measurement_var = kf.number("measurement_var", 0.01);
  kopts.initial.var = kf.number("initial_var", 1.0);

  const auto fit = building::fit_parameters(data);
  ctx.note("fitted R=" + fmt(fit.params.R) + " C=" + fmt(fit.params.C) + " p=" + fmt(fit.params.p));

  const auto n = data.t_int.size();
  const auto zeros = like(data.t_int, std::vector<double>(n, 0.0), "");
  ScenarioInputs inputs{data.t_ext, data.irradiance, zeros, zeros};
  kopts.initial.mean = data.t_int[0];
  const auto kal = building::kalman_estimate(fit.params, data.t_int, data.q_hvac, inputs, kopts);

  // One-step-ahead predictions of the fitted model, for plotting.
  std::vector<double> one_step(n, ts::kMissing);
  for (std::size_t t = 1; t < n; ++t) {
    if (ts::is_missing(data.t_int[t - 1])) continue;
    one_step[t] = building::rc_step(data.t_int[t - 1], data.t_ext[t - 1], data.q_hvac[t - 1], data.irradiance[t - 1],
                                    fit.params, data.t_int.step_hours());
  }

  json params = {{"R", fit.params.R}, {"C", fit.params.C}, {"p", fit.params.p},
                 {"time_constant_hours", fit.params.time_constant_hours()}};
  json report = {
      {"params", params},
      {"one_step_accuracy", ts::to_json(fit.report)},
      {"kalman",
       {{"process_var", kopts.process_var},
        {"measurement_var", kopts.measurement_var},
        {"accuracy_vs_measured", ts::to_json(ts::score(data.t_int, kal.mean))},
        {"final_mean", kal.mean.values.back()},
        {"final_variance", kal.variance.back()}}},
  };
  ctx.out.add_json("building_fit.json", report);
  ctx.out.add("building_kalman.csv", ts::to_csv({{"measured", data.t_int},
                                                 {"one_step_model", like(data.t_int, one_step, "degC")},
                                                 {"kalman_mean", kal.mean},
                                                 {"kalman_variance", like(data.t_int, kal.variance, "")}}));
}

void run_mpc(Context& ctx) {
  const auto b = read_building(ctx);
  auto& sec = ctx.root().child("mpc");
  auto& w = sec.child("weights");
  building::ObjectiveWeights weights{w.number("cost", 1.0), w.number("carbon", 0.0), w.number("comfort", 1.0)};
  auto& th = sec.child("thermostat");
  building::ThermostatSpec thermostat;
  thermostat.deadband = th.number("deadband", thermostat.deadband);
  thermostat.preheat_steps = th.count("preheat_steps", 0);
  thermostat.setback = th.number("setback", thermostat.setback);
  const auto mode = sec.text("mode", "open_loop");
  const auto opts = solver(ctx);

  const std::size_t n = b.inputs.size();
  auto baseline = building::simulate(b.params, building::thermostat_policy(b.hvac, b.comfort, thermostat), b.hvac,
                                     b.comfort, b.inputs, b.t_int0, n);
  BuildingSchedule mpc;
  json mode_json = {{"mode", mode}};
  if (mode == "open_loop") {
    mpc = building::optimise_horizon(b.params, b.hvac, b.comfort, weights, b.inputs, b.t_int0, opts);
  } else if (mode == "rolling") {
    building::RollingOptions r;
    r.horizon = sec.count("horizon", 48);
    r.total_steps = n;
    const auto feedback = sec.text("feedback", "kalman");
    if (feedback == "kalman") {
      r.feedback = building::Feedback::kalman;
    } else if (feedback == "none") {
      r.feedback = building::Feedback::none;
    } else {
      throw ConfigError("mpc.feedback must be \"kalman\" or \"none\"");
    }
    r.measurement_sd = sec.number("measurement_sd", 0.0);
    r.process_sd = sec.number("process_sd", 0.0);
    r.seed = ctx.seed();
    mpc = building::rolling_mpc(b.params, b.params, b.hvac, b.comfort, weights, b.inputs, b.t_int0, r, opts);
    mode_json.update({{"horizon", r.horizon}, {"feedback", feedback}, {"measurement_sd", r.measurement_sd},
                      {"process_sd", r.process_sd}, {"seed", r.seed}});
  } else {
    throw ConfigError("mpc.mode must be \"open_loop\" or \"rolling\"");
  }

  json report = {{"settings", mode_json},
                 {"weights", building::to_json(weights)},
                 {"mpc", summary(mpc)},
                 {"thermostat", summary(baseline)}};
  report["cost_saving_pct"] = baseline.cost > 0 ? 100.0 * (baseline.cost - mpc.cost) / baseline.cost : 0.0;
  report["comfort_not_worse"] = mpc.comfort_criterion >= baseline.comfort_criterion;
  ctx.out.add_json("mpc_summary.json", report);

  std::vector<double> occ;
  for (bool o : b.comfort.occupied) occ.push_back(o ? 1.0 : 0.0);
  std::vector<std::pair<std::string, ts::TimeSeries>> cols{
      {"t_ext", b.inputs.t_ext},   {"price", b.inputs.price},         {"target", b.comfort.target},
      {"occupied", like(b.inputs.t_ext, occ, "")}, {"mpc_q_hvac", mpc.q_hvac}, {"mpc_t_int", mpc.t_int},
      {"thermostat_q_hvac", baseline.q_hvac},      {"thermostat_t_int", baseline.t_int}};
  if (b.hvac.q_cool_max > 0) {
    cols.emplace_back("mpc_q_cool", mpc.q_cool);
    cols.emplace_back("thermostat_q_cool", baseline.q_cool);
  }
  ctx.out.add("mpc_schedule.csv", ts::to_csv(cols));
}

void run_pareto(Context& ctx) {
  const auto b = read_building(ctx);
  std::vector<building::ObjectiveWeights> grid;
  if (ctx.root().has("pareto")) {
    auto& sec = ctx.root().child("pareto");
    if (sec.has("grid")) {
      const auto& g = sec.raw("grid");
      if (!g.is_array() || g.empty()) throw ConfigError("pareto.grid must be a non-empty array");
      for (std::size_t i = 0; i < g.size(); ++i) {
        Section w(g[i], "pareto.grid[" + std::to_string(i) + "]");
        grid.push_back({w.number("cost"), w.number("carbon"), w.number("comfort")});
        w.finish();
      }
    }
  }
  if (grid.empty()) grid = building::default_weight_grid();
  const auto result = building::pareto_sweep(grid, b.params, b.hvac, b.comfort, b.inputs, b.t_int0, solver(ctx));

  json points = json::array();
  std::vector<bool> on_front(result.points.size(), false);
  for (auto i : result.front) on_front[i] = true;
  std::string csv = "index,w_cost,w_carbon,w_comfort,cost,carbon,comfort_criterion,on_front\n";
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& p = result.points[i];
    points.push_back(building::to_json(p));
    csv += std::to_string(i) + "," + fmt(p.weights.cost) + "," + fmt(p.weights.carbon) + "," + fmt(p.weights.comfort) +
           "," + fmt(p.cost) + "," + fmt(p.carbon) + "," + fmt(p.comfort) + "," + (on_front[i] ? "1" : "0") + "\n";
  }
  json front = json::array();
  for (auto i : result.front) {
    auto p = building::to_json(result.points[i]);
    p["index"] = i;
    front.push_back(p);
  }
  ctx.out.add_json("pareto_points.json", points);
  ctx.out.add_json("pareto_front.json", front);
  ctx.out.add("pareto_points.csv", csv);
}

}  // namespace energyopt::cli
