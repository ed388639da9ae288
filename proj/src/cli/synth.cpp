#include <random>

#include "config.hpp"
#include "energyopt/synthetic.hpp"
#include "energyopt/timeseries/csv.hpp"

namespace energyopt::cli {

void run_synth(Context& ctx) {
  std::size_t meters = 12, meter_days = 28, building_days = 7, history_days = 14, chp_days = 2, ems_days = 7;
  if (ctx.root().has("synth")) {
    auto& s = ctx.root().child("synth");
    meters = s.count("meters", meters);
    meter_days = s.count("meter_days", meter_days);
    building_days = s.count("building_days", building_days);
    history_days = s.count("history_days", history_days);
    chp_days = s.count("chp_days", chp_days);
    ems_days = s.count("ems_days", ems_days);
  }
  if (meters < 2 || meter_days < 9 || building_days == 0 || history_days < 2 || chp_days == 0 || ems_days == 0) {
    throw ConfigError("synth: need at least 2 meters, 9 meter days and one day of everything else");
  }
  const auto seed = ctx.seed();
  json config;
  config["seed"] = seed;
  config["output_dir"] = "../results";
  config["solver"] = {{"rel_gap", 1e-6}, {"max_nodes", 200000}};

  // Meters, with a day of weather beyond them for the forward forecast.
  const auto portfolio = synthetic::meter_portfolio(seed, meters, meter_days + 1);
  const std::size_t n = meter_days * 48;
  std::vector<std::pair<std::string, ts::TimeSeries>> cols;
  std::string labels = "meter_id,contract,sector,district\n";
  for (const auto& m : portfolio.meters) {
    cols.emplace_back(m.meter_id, m.series.slice(0, n));
    labels += m.meter_id + "," + m.labels.at("contract") + "," + m.labels.at("sector") + "," + m.labels.at("district") + "\n";
  }
  ctx.out.add("meters.csv", ts::to_csv(cols));
  ctx.out.add("meter_labels.csv", labels);
  ctx.out.add("weather.csv", ts::to_csv({{"temperature", portfolio.temperature}}));
  config["forecast"] = {{"meters", "meters.csv"},
                        {"labels", "meter_labels.csv"},
                        {"weather", "weather.csv"},
                        {"cleaning", {{"min_completeness", 0.9}, {"max_gap", 4}, {"anomaly_z", 10.0}}},
                        {"models", {{"ema_alpha", 0.3}, {"season_length", 336}, {"ar_lags", 4}, {"exogenous", true}}},
                        {"backtest", {{"horizon", 48}, {"window", 336}}}};

  const auto b = synthetic::winter_building(seed, building_days);
  std::vector<double> occupied;
  for (bool o : b.comfort.occupied) occupied.push_back(o ? 1.0 : 0.0);
  const ts::TimeSeries occ(b.inputs.t_ext.start, b.inputs.t_ext.resolution, occupied, "");
  ctx.out.add("building_week.csv", ts::to_csv({{"t_ext", b.inputs.t_ext},
                                               {"irradiance", b.inputs.irradiance},
                                               {"price", b.inputs.price},
                                               {"carbon", b.inputs.carbon},
                                               {"target", b.comfort.target},
                                               {"occupied", occ}}));
  const auto history = synthetic::rc_history(b.params, seed, history_days * 48, 0.05);
  ctx.out.add("building_history.csv", ts::to_csv({{"t_int", history.t_int},
                                                  {"t_ext", history.t_ext},
                                                  {"irradiance", history.irradiance},
                                                  {"q_hvac", history.q_hvac}}));
  config["fit_building"] = {{"history", "building_history.csv"},
                            {"kalman", {{"process_var", 0.01}, {"measurement_var", 0.0025}}}};
  config["building"] = {{"scenario", "building_week.csv"},
                        {"model", {{"R", b.params.R}, {"C", b.params.C}, {"p", b.params.p}}},
                        {"hvac", {{"q_max", b.hvac.q_max}, {"cop_heat", b.hvac.cop_heat}}},
                        {"comfort_band", b.comfort.band},
                        {"t_int0", b.t_int0}};
  config["mpc"] = {{"mode", "rolling"},
                   {"horizon", 48},
                   {"feedback", "kalman"},
                   {"measurement_sd", 0.1},
                   {"process_sd", 0.05},
                   {"weights", {{"cost", 1.0}, {"carbon", 0.0}, {"comfort", 10.0}}},
                   {"thermostat",
                    {{"deadband", b.thermostat.deadband},
                     {"preheat_steps", b.thermostat.preheat_steps},
                     {"setback", b.thermostat.setback}}}};
  config["pareto"] = json::object();

  const auto site = synthetic::chp_site(seed, chp_days);
  const auto& sc = site.scenario;
  ctx.out.add("chp_site.csv", ts::to_csv({{"e_demand", sc.e_demand},
                                          {"q_demand", sc.q_demand},
                                          {"p_gas", sc.p_gas},
                                          {"p_import", sc.p_import},
                                          {"p_export", sc.p_export}}));
  const auto& a = site.assets;
  config["chp"] = {
      {"scenario", "chp_site.csv"},
      {"max_restarts_per_day", sc.max_restarts_per_day},
      {"initial_on", sc.initial_on},
      {"artificial",
       {{"import_pref", sc.artificial.import_pref},
        {"chp_pref", sc.artificial.chp_pref},
        {"boiler_pref", sc.artificial.boiler_pref},
        {"restart", sc.artificial.restart}}},
      {"chp_unit",
       {{"elec_capacity", a.chp.elec_capacity},
        {"heat_capacity", a.chp.heat_capacity},
        {"gas_per_elec", a.chp.gas_per_elec},
        {"min_load_fraction", a.chp.min_load_fraction},
        {"maintenance_cost_per_hour", a.chp.maintenance_cost_per_hour}}},
      {"boiler", {{"heat_capacity", a.boiler.heat_capacity}, {"efficiency", a.boiler.efficiency}}},
      {"baseline", {{"start_hour", site.rule.start_hour}, {"end_hour", site.rule.end_hour}, {"load", site.rule.load}}}};
  if (a.store) {
    config["chp"]["store"] = {{"capacity", a.store->capacity},
                              {"min_level", a.store->min_level},
                              {"max_charge_rate", a.store->max_charge_rate},
                              {"max_discharge_rate", a.store->max_discharge_rate},
                              {"initial_soe", a.store->initial_soe}};
  }

  const auto e = synthetic::ems_site(seed, ems_days);
  // "Measured" PV: a slightly less efficient array with multiplicative noise.
  auto measured_spec = e.pv;
  measured_spec.system_efficiency *= 0.96;
  auto measured = ems::simulate_pv(e.irradiance, e.ambient_temp, measured_spec);
  std::mt19937_64 rng(seed ^ 0x5eed);
  std::normal_distribution<double> noise(0.0, 0.04);
  for (auto& v : measured.values) v = std::max(0.0, v * (1.0 + noise(rng)));
  ctx.out.add("ems_site.csv", ts::to_csv({{"irradiance", e.irradiance},
                                          {"ambient_temp", e.ambient_temp},
                                          {"load", e.load},
                                          {"carbon", e.carbon},
                                          {"measured_pv", measured}}));
  json battery = {{"capacity", e.battery.capacity}, {"soc_min", e.battery.soc_min}, {"soc_max", e.battery.soc_max},
                  {"p_max", e.battery.p_max},       {"eta_c", e.battery.eta_c},     {"eta_d", e.battery.eta_d},
                  {"initial_soc", e.battery.initial_soc}};
  if (e.battery.cycle_limit) battery["cycle_limit"] = *e.battery.cycle_limit;
  config["ems"] = {{"site", "ems_site.csv"},
                   {"pv",
                    {{"dc_rating", e.pv.dc_rating},
                     {"derate_coeff", e.pv.derate_coeff},
                     {"ref_temp", e.pv.ref_temp},
                     {"system_efficiency", e.pv.system_efficiency},
                     {"irradiance_at_rating", e.pv.irradiance_at_rating}}},
                   {"battery", battery},
                   {"tariff",
                    {{"base_price", e.base_price},
                     {"peak_multiplier", e.peak_multiplier},
                     {"export_price", e.export_price},
                     {"w_carbon", 0.0}}},
                   {"twin_strategy", "baseline"}};

  ctx.out.add_json("config.json", config);
}

}  // namespace energyopt::cli
