#include "config.hpp"
#include "energyopt/ems/dispatch.hpp"
#include "energyopt/timeseries/csv.hpp"

namespace energyopt::cli {

namespace {

ems::Strategy parse_strategy(const std::string& name) {
  for (auto s : {ems::Strategy::baseline, ems::Strategy::self_consumption, ems::Strategy::cost}) {
    if (ems::to_string(s) == name) return s;
  }
  throw ConfigError("unknown EMS strategy '" + name + "' (baseline, self_consumption or cost)");
}

std::string dispatch_csv(const ems::DispatchResult& r, const ems::Tariff& tariff) {
  const auto& grid = tariff.import_price;
  const auto col = [&](const std::vector<double>& v, const char* unit) {
    return ts::TimeSeries(grid.start, grid.resolution, v, unit);
  };
  return ts::to_csv({{"import_price", grid},
                     {"pv", col(r.pv, "kWh")},
                     {"load", col(r.load, "kWh")},
                     {"charge", col(r.charge, "kWh")},
                     {"discharge", col(r.discharge, "kWh")},
                     {"import", col(r.import, "kWh")},
                     {"export", col(r.export_, "kWh")},
                     {"soc", col(r.soc, "%")}});
}

}  // namespace

void run_ems(Context& ctx) {
  auto& sec = ctx.root().child("ems");
  const auto table = ctx.series(sec, "site");
  const std::string file = ctx.inputs().back().name;
  const auto irradiance = require_column(table, "irradiance", file, "W/m2");
  const auto ambient = require_column(table, "ambient_temp", file, "degC");
  const auto load = require_column(table, "load", file, "kWh");
  const auto carbon = require_column(table, "carbon", file, "g/kWh");

  auto& pv = sec.child("pv");
  ems::PvSpec pv_spec;
  pv_spec.dc_rating = pv.number("dc_rating");
  pv_spec.derate_coeff = pv.number("derate_coeff", pv_spec.derate_coeff);
  pv_spec.ref_temp = pv.number("ref_temp", pv_spec.ref_temp);
  pv_spec.system_efficiency = pv.number("system_efficiency", pv_spec.system_efficiency);
  pv_spec.irradiance_at_rating = pv.number("irradiance_at_rating", pv_spec.irradiance_at_rating);

  auto& bat = sec.child("battery");
  ems::BatterySpec battery;
  battery.capacity = bat.number("capacity");
  battery.soc_min = bat.number("soc_min", battery.soc_min);
  battery.soc_max = bat.number("soc_max", battery.soc_max);
  battery.p_max = bat.number("p_max");
  battery.eta_c = bat.number("eta_c", battery.eta_c);
  battery.eta_d = bat.number("eta_d", battery.eta_d);
  battery.cycle_limit = bat.optional_number("cycle_limit");
  battery.initial_soc = bat.number("initial_soc", battery.initial_soc);

  auto& tar = sec.child("tariff");
  const double base = tar.number("base_price");
  const double mult = tar.number("peak_multiplier");
  const double export_price = tar.number("export_price", 0.0);
  const double w_carbon = tar.number("w_carbon", 0.0);

  std::vector<ems::Strategy> strategies{ems::Strategy::baseline, ems::Strategy::self_consumption,
                                        ems::Strategy::cost};
  if (sec.has("strategies")) {
    strategies.clear();
    for (const auto& name : sec.texts("strategies")) strategies.push_back(parse_strategy(name));
  }
  const auto twin_strategy = parse_strategy(sec.text("twin_strategy", "baseline"));
  const std::string measured_column = sec.text("measured_pv_column", "measured_pv");
  try {
    pv_spec.validate();
    battery.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("ems: ") + e.what());
  }
  const auto opts = ctx.root().has("solver") ? solve_options(ctx.root().child("solver")) : milp::SolveOptions{};

  const auto pv_series = ems::simulate_pv(irradiance, ambient, pv_spec);
  const auto tariffs = ems::tariff_scenarios(base, mult, export_price, carbon, w_carbon);

  json tariff_reports = json::object();
  for (const auto& tariff : tariffs) {
    json runs = json::object();
    std::optional<double> baseline_cost;
    for (auto s : strategies) {
      ctx.note("ems: " + tariff.name + " / " + ems::to_string(s));
      const auto r = ems::dispatch(s, pv_series, load, battery, tariff, opts);
      if (s == ems::Strategy::baseline) baseline_cost = r.cost;
      auto j = ems::summary_json(r);
      j["max_balance_residual"] = ems::max_balance_residual(r);
      runs[ems::to_string(s)] = j;
      ctx.out.add("ems_" + tariff.name + "_" + ems::to_string(s) + ".csv", dispatch_csv(r, tariff));
    }
    if (!baseline_cost) baseline_cost = ems::baseline_dispatch(pv_series, load, battery, tariff).cost;
    for (auto& [name, j] : runs.items()) {
      const double cost = j["cost"].get<double>();
      j["savings_vs_baseline_pct"] =
          *baseline_cost != 0.0 ? json(100.0 * (*baseline_cost - cost) / std::abs(*baseline_cost)) : json(nullptr);
    }
    tariff_reports[tariff.name] = runs;
  }

  json twin = nullptr;
  if (table.contains(measured_column)) {
    const auto measured = require_column(table, measured_column, file, "kWh");
    twin = ems::to_json(ems::evaluate_twin(pv_series, measured, load, battery, tariffs.front(), twin_strategy, opts));
    twin["tariff"] = tariffs.front().name;
    twin["strategy"] = ems::to_string(twin_strategy);
  }
  double pv_total = 0.0, load_total = 0.0;
  for (double v : pv_series.values) pv_total += v;
  for (double v : load.values) load_total += v;
  json report = {{"steps", load.size()},
                 {"pv_kwh", pv_total},
                 {"load_kwh", load_total},
                 {"tariffs", tariff_reports},
                 {"twin", twin}};
  ctx.out.add_json("ems_summary.json", report);
  ctx.out.add("ems_pv.csv", ts::to_csv({{"irradiance", irradiance}, {"ambient_temp", ambient}, {"pv", pv_series}}));
}

}  // namespace energyopt::cli
