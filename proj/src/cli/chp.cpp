#include "config.hpp"
#include "energyopt/chp/network.hpp"
#include "energyopt/timeseries/csv.hpp"

namespace energyopt::cli {

namespace {

std::string schedule_csv(const chp::NetworkSchedule& s, const ts::TimeSeries& grid) {
  const auto col = [&](const std::vector<double>& v, const char* unit) {
    return ts::TimeSeries(grid.start, grid.resolution, v, unit);
  };
  std::vector<double> on(s.chp_on.begin(), s.chp_on.end());
  return ts::to_csv({{"chp_on", col(on, "")},
                     {"chp_load", col(s.chp_load, "")},
                     {"e_chp", col(s.e_chp, "kW")},
                     {"q_chp", col(s.q_chp, "kW")},
                     {"e_import", col(s.e_import, "kW")},
                     {"e_export", col(s.e_export, "kW")},
                     {"q_boiler", col(s.q_boiler, "kW")},
                     {"q_charge", col(s.q_charge, "kW")},
                     {"q_discharge", col(s.q_discharge, "kW")},
                     {"soe", col(s.soe, "kWh")}});
}

json schedule_json(const chp::NetworkSchedule& s, const chp::NetworkScenario& scenario) {
  json restarts = json::object();
  for (const auto& [day, count] : s.restarts_per_day) {
    restarts[ts::format_iso8601(ts::TimePoint{} + std::chrono::days(day)).substr(0, 10)] = count;
  }
  return {{"costs", chp::to_json(s.costs)},
          {"restarts_per_day", restarts},
          {"status", milp::to_string(s.status)},
          {"gap", s.gap},
          {"max_balance_residual", chp::max_balance_residual(s, scenario)}};
}

}  // namespace

void run_chp(Context& ctx) {
  auto& sec = ctx.root().child("chp");
  const auto table = ctx.series(sec, "scenario");
  const std::string file = ctx.inputs().back().name;
  chp::NetworkScenario scenario;
  scenario.e_demand = require_column(table, "e_demand", file, "kW");
  scenario.q_demand = require_column(table, "q_demand", file, "kW");
  scenario.p_gas = require_column(table, "p_gas", file, "per kWh");
  scenario.p_import = require_column(table, "p_import", file, "per kWh");
  scenario.p_export = require_column(table, "p_export", file, "per kWh");
  scenario.max_restarts_per_day = static_cast<int>(sec.count("max_restarts_per_day", 1));
  scenario.initial_on = sec.boolean("initial_on", false);
  if (sec.has("artificial")) {
    auto& a = sec.child("artificial");
    scenario.artificial = {a.number("import_pref", 0.0), a.number("chp_pref", 0.0), a.number("boiler_pref", 0.0),
                           a.number("restart", 0.0)};
  }

  chp::Assets assets;
  auto& c = sec.child("chp_unit");
  assets.chp = {c.number("elec_capacity"), c.number("heat_capacity"), c.number("gas_per_elec"),
                c.number("min_load_fraction", 0.0), c.number("maintenance_cost_per_hour", 0.0)};
  auto& bo = sec.child("boiler");
  assets.boiler = {bo.number("heat_capacity"), bo.number("efficiency", 0.9)};
  if (sec.has("store")) {
    auto& st = sec.child("store");
    assets.store = chp::ThermalStoreSpec{st.number("capacity"), st.number("min_level", 0.0),
                                         st.number("max_charge_rate"), st.number("max_discharge_rate"),
                                         st.number("initial_soe", 0.0)};
  }
  chp::BaselineRule rule;
  if (sec.has("baseline")) {
    auto& r = sec.child("baseline");
    rule = {r.number("start_hour", rule.start_hour), r.number("end_hour", rule.end_hour), r.number("load", rule.load)};
  }
  try {
    scenario.validate();
    assets.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("chp: ") + e.what());
  }
  const auto opts = ctx.root().has("solver") ? solve_options(ctx.root().child("solver")) : milp::SolveOptions{};

  ctx.note("chp: optimising " + std::to_string(scenario.size()) + " steps");
  const auto optimised = chp::optimise(scenario, assets, opts);
  const auto baseline = chp::baseline_schedule(scenario, assets, rule);

  json report = {{"optimised", schedule_json(optimised, scenario)},
                 {"baseline", schedule_json(baseline, scenario)},
                 {"baseline_rule", {{"start_hour", rule.start_hour}, {"end_hour", rule.end_hour}, {"load", rule.load}}},
                 {"comparison", chp::to_json(chp::compare(baseline, optimised))}};
  ctx.out.add_json("chp_costs.json", report);
  ctx.out.add("chp_optimised.csv", schedule_csv(optimised, scenario.e_demand));
  ctx.out.add("chp_baseline.csv", schedule_csv(baseline, scenario.e_demand));
}

}  // namespace energyopt::cli
