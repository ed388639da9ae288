#include "energyopt/chp/network.hpp"

#include <cmath>
#include <limits>

#include "energyopt/error.hpp"

namespace energyopt::chp {

namespace {

using milp::Relation;

enum Slot : std::size_t { kOn, kRestart, kLoad, kImport, kExport, kBoiler, kCharge, kDischarge, kSoe };

std::size_t var(std::size_t t, Slot s) { return t * kVarsPerStep + s; }

std::string at(const char* name, std::size_t t) { return std::string(name) + "[" + std::to_string(t) + "]"; }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ThermalStoreSpec store_or_empty(const Assets& a) { return a.store.value_or(ThermalStoreSpec{}); }

}  // namespace

void ChpSpec::validate() const {
  if (!(elec_capacity > 0.0) || !(heat_capacity > 0.0)) throw ValidationError("CHP: capacities must be positive");
  if (!(gas_per_elec >= 0.0)) throw ValidationError("CHP: gas_per_elec must be >= 0");
  if (!(min_load_fraction >= 0.0 && min_load_fraction <= 1.0)) {
    throw ValidationError("CHP: min_load_fraction must lie in [0, 1]");
  }
  if (!(maintenance_cost_per_hour >= 0.0)) throw ValidationError("CHP: maintenance cost must be >= 0");
}

void BoilerSpec::validate() const {
  if (!(heat_capacity >= 0.0)) throw ValidationError("boiler: heat_capacity must be >= 0");
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw ValidationError("boiler: efficiency must lie in (0, 1]");
}

void ThermalStoreSpec::validate() const {
  if (!(min_level >= 0.0 && min_level <= initial_soe && initial_soe <= capacity)) {
    throw ValidationError("thermal store: need 0 <= min_level <= initial_soe <= capacity");
  }
  if (!(max_charge_rate >= 0.0) || !(max_discharge_rate >= 0.0)) {
    throw ValidationError("thermal store: charge and discharge rates must be >= 0");
  }
}

void Assets::validate() const {
  chp.validate();
  boiler.validate();
  if (store) store->validate();
}

void NetworkScenario::validate() const {
  if (e_demand.empty()) throw ValidationError("CHP scenario: no steps");
  ts::require_aligned(e_demand, q_demand, "CHP scenario heat demand");
  ts::require_aligned(e_demand, p_gas, "CHP scenario gas price");
  ts::require_aligned(e_demand, p_import, "CHP scenario import price");
  ts::require_aligned(e_demand, p_export, "CHP scenario export price");
  for (const auto* s : {&e_demand, &q_demand, &p_gas, &p_import, &p_export}) {
    for (double v : s->values) {
      if (!std::isfinite(v)) throw ValidationError("CHP scenario: series must be complete and finite");
    }
  }
  for (double v : e_demand.values) {
    if (v < 0.0) throw ValidationError("CHP scenario: electricity demand must be >= 0");
  }
  for (double v : q_demand.values) {
    if (v < 0.0) throw ValidationError("CHP scenario: heat demand must be >= 0");
  }
  if (max_restarts_per_day < 0) throw ValidationError("CHP scenario: max_restarts_per_day must be >= 0");
  const auto& a = artificial;
  if (!(a.import_pref >= 0.0 && a.chp_pref >= 0.0 && a.boiler_pref >= 0.0 && a.restart >= 0.0)) {
    throw ValidationError("CHP scenario: artificial cost coefficients must be >= 0");
  }
}

milp::MilpProblem build_problem(const NetworkScenario& scenario, const Assets& assets) {
  scenario.validate();
  assets.validate();
  const std::size_t n = scenario.size();
  const double dt = scenario.step_hours();
  const auto& chp = assets.chp;
  const auto store = store_or_empty(assets);
  const auto& art = scenario.artificial;

  milp::MilpProblem p;
  for (std::size_t t = 0; t < n; ++t) {
    const double gas = scenario.p_gas[t];
    p.add_binary(at("S", t), chp.maintenance_cost_per_hour * dt);
    p.add_binary(at("R", t), art.restart);
    p.add_variable(at("load", t), 0.0, 1.0, (chp.elec_capacity * chp.gas_per_elec * gas + art.chp_pref * chp.elec_capacity) * dt);
    p.add_variable(at("E_import", t), 0.0, milp::kInf, (scenario.p_import[t] + art.import_pref) * dt);
    p.add_variable(at("E_export", t), 0.0, milp::kInf, -scenario.p_export[t] * dt);
    p.add_variable(at("Q_boiler", t), 0.0, assets.boiler.heat_capacity, (gas / assets.boiler.efficiency + art.boiler_pref) * dt);
    p.add_variable(at("Q_charge", t), 0.0, store.max_charge_rate);
    p.add_variable(at("Q_discharge", t), 0.0, store.max_discharge_rate);
    p.add_variable(at("SOE", t), store.min_level, store.capacity);
  }

  std::map<long long, std::vector<milp::Term>> day_restarts;
  for (std::size_t t = 0; t < n; ++t) {
    p.add_constraint(at("elec_balance", t),
                     {{var(t, kLoad), chp.elec_capacity}, {var(t, kImport), 1.0}, {var(t, kExport), -1.0}},
                     Relation::equal, scenario.e_demand[t]);
    p.add_constraint(at("heat_balance", t),
                     {{var(t, kLoad), chp.heat_capacity},
                      {var(t, kBoiler), 1.0},
                      {var(t, kDischarge), 1.0},
                      {var(t, kCharge), -1.0}},
                     Relation::equal, scenario.q_demand[t]);
    p.add_constraint(at("export_cap", t), {{var(t, kExport), 1.0}, {var(t, kLoad), -chp.elec_capacity}},
                     Relation::less_equal, 0.0);
    p.add_constraint(at("load_max", t), {{var(t, kLoad), 1.0}, {var(t, kOn), -1.0}}, Relation::less_equal, 0.0);
    if (chp.min_load_fraction > 0.0) {
      p.add_constraint(at("load_min", t), {{var(t, kLoad), 1.0}, {var(t, kOn), -chp.min_load_fraction}},
                       Relation::greater_equal, 0.0);
    }
    if (t == 0) {
      p.add_constraint(at("restart", t), {{var(t, kRestart), 1.0}, {var(t, kOn), -1.0}}, Relation::greater_equal,
                       scenario.initial_on ? -1.0 : 0.0);
      p.add_constraint(at("soe", t), {{var(t, kSoe), 1.0}, {var(t, kCharge), -dt}, {var(t, kDischarge), dt}},
                       Relation::equal, store.initial_soe);
    } else {
      p.add_constraint(at("restart", t),
                       {{var(t, kRestart), 1.0}, {var(t, kOn), -1.0}, {var(t - 1, kOn), 1.0}},
                       Relation::greater_equal, 0.0);
      p.add_constraint(at("soe", t),
                       {{var(t, kSoe), 1.0}, {var(t - 1, kSoe), -1.0}, {var(t, kCharge), -dt}, {var(t, kDischarge), dt}},
                       Relation::equal, 0.0);
    }
    day_restarts[ts::day_index(scenario.e_demand.time_at(t))].push_back({var(t, kRestart), 1.0});
  }
  for (auto& [day, terms] : day_restarts) {
    p.add_constraint("restart_cap[day " + std::to_string(day) + "]", std::move(terms), Relation::less_equal,
                     scenario.max_restarts_per_day);
  }
  return p;
}

void evaluate(NetworkSchedule& s, const NetworkScenario& scenario, const Assets& assets) {
  const double dt = scenario.step_hours();
  const auto& art = scenario.artificial;
  CostBreakdown c;
  s.restarts_per_day.clear();
  int previous = scenario.initial_on ? 1 : 0;
  int restarts = 0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    const double gas = s.e_chp[t] * assets.chp.gas_per_elec + s.q_boiler[t] / assets.boiler.efficiency;
    c.gas += gas * scenario.p_gas[t] * dt;
    c.import += s.e_import[t] * scenario.p_import[t] * dt;
    c.export_revenue += s.e_export[t] * scenario.p_export[t] * dt;
    c.maintenance += assets.chp.maintenance_cost_per_hour * s.chp_on[t] * dt;
    c.artificial += (art.import_pref * s.e_import[t] + art.chp_pref * s.e_chp[t] + art.boiler_pref * s.q_boiler[t]) * dt;
    auto& day = s.restarts_per_day[ts::day_index(scenario.e_demand.time_at(t))];
    if (s.chp_on[t] == 1 && previous == 0) {
      ++day;
      ++restarts;
    }
    previous = s.chp_on[t];
  }
  c.artificial += art.restart * restarts;
  s.costs = c;
}

double max_balance_residual(const NetworkSchedule& s, const NetworkScenario& scenario) {
  double worst = 0.0;
  for (std::size_t t = 0; t < s.size(); ++t) {
    const double e = s.e_chp[t] + s.e_import[t] - s.e_export[t] - scenario.e_demand[t];
    const double q = s.q_chp[t] + s.q_boiler[t] + s.q_discharge[t] - s.q_charge[t] - scenario.q_demand[t];
    worst = std::max({worst, std::abs(e), std::abs(q)});
  }
  return worst;
}

namespace {

NetworkSchedule empty_schedule(std::size_t n) {
  NetworkSchedule s;
  s.chp_on.assign(n, 0);
  for (auto* v : {&s.chp_load, &s.e_chp, &s.q_chp, &s.e_import, &s.e_export, &s.q_boiler, &s.q_charge,
                  &s.q_discharge, &s.soe}) {
    v->assign(n, 0.0);
  }
  return s;
}

std::string diagnose(const NetworkScenario& sc, const Assets& a) {
  const auto store = store_or_empty(a);
  const double dt = sc.step_hours();
  const double firm = a.chp.heat_capacity + a.boiler.heat_capacity;
  double reserve = store.initial_soe - store.min_level;
  for (std::size_t t = 0; t < sc.size(); ++t) {
    const double need = sc.q_demand[t];
    if (need > firm + store.max_discharge_rate + 1e-9) {
      return "heat capacity shortfall at step " + std::to_string(t) + ": demand " + num(need) + " kW exceeds " +
             num(firm + store.max_discharge_rate) + " kW of CHP, boiler and store output";
    }
    reserve -= std::max(0.0, need - firm) * dt;
    if (reserve < -1e-9) {
      return "heat capacity shortfall at step " + std::to_string(t) + ": thermal store exhausted";
    }
  }
  if (sc.max_restarts_per_day == 0 && !sc.initial_on) {
    for (std::size_t t = 0; t < sc.size(); ++t) {
      if (sc.q_demand[t] > a.boiler.heat_capacity + store.max_discharge_rate + 1e-9) {
        return "heat capacity shortfall at step " + std::to_string(t) +
               ": the restart limit keeps the CHP off and the boiler cannot meet demand";
      }
    }
  }
  return "no schedule meets the heat balance within the restart limit and minimum CHP load";
}

}  // namespace

NetworkSchedule optimise(const NetworkScenario& scenario, const Assets& assets, const milp::SolveOptions& opts) {
  const auto problem = build_problem(scenario, assets);
  const auto sol = milp::solve_milp(problem, opts);
  if (sol.status == milp::SolveStatus::infeasible) throw InfeasibleError(diagnose(scenario, assets));
  if (!sol.has_values()) {
    throw SolverLimitError("CHP schedule: solver stopped (" + milp::to_string(sol.status) + ") without a schedule");
  }
  const std::size_t n = scenario.size();
  auto s = empty_schedule(n);
  const auto& x = sol.values;
  for (std::size_t t = 0; t < n; ++t) {
    s.chp_on[t] = x[var(t, kOn)] > 0.5 ? 1 : 0;
    s.chp_load[t] = s.chp_on[t] ? std::clamp(x[var(t, kLoad)], 0.0, 1.0) : 0.0;
    s.e_chp[t] = s.chp_load[t] * assets.chp.elec_capacity;
    s.q_chp[t] = s.chp_load[t] * assets.chp.heat_capacity;
    s.e_import[t] = std::max(0.0, x[var(t, kImport)]);
    s.e_export[t] = std::max(0.0, x[var(t, kExport)]);
    s.q_boiler[t] = std::max(0.0, x[var(t, kBoiler)]);
    s.q_charge[t] = std::max(0.0, x[var(t, kCharge)]);
    s.q_discharge[t] = std::max(0.0, x[var(t, kDischarge)]);
    s.soe[t] = x[var(t, kSoe)];
  }
  s.status = sol.status;
  s.gap = sol.gap;
  evaluate(s, scenario, assets);
  return s;
}

NetworkSchedule baseline_schedule(const NetworkScenario& scenario, const Assets& assets, const BaselineRule& rule) {
  scenario.validate();
  assets.validate();
  if (!(rule.start_hour >= 0.0 && rule.start_hour <= rule.end_hour && rule.end_hour <= 24.0)) {
    throw ValidationError("baseline rule: need 0 <= start_hour <= end_hour <= 24");
  }
  if (!(rule.load >= 0.0 && rule.load <= 1.0)) throw ValidationError("baseline rule: load must lie in [0, 1]");

  const std::size_t n = scenario.size();
  const double dt = scenario.step_hours();
  const auto& chp = assets.chp;
  const auto store = store_or_empty(assets);
  auto s = empty_schedule(n);
  double soe = store.initial_soe;
  for (std::size_t t = 0; t < n; ++t) {
    const double hour = ts::minute_of_day(scenario.e_demand.time_at(t)) / 60.0;
    const double demand = scenario.q_demand[t];
    double load = 0.0;
    if (hour >= rule.start_hour && hour < rule.end_hour && rule.load > 0.0) {
      const double absorb = demand + std::min(store.max_charge_rate, (store.capacity - soe) / dt);
      load = std::min(rule.load, absorb / chp.heat_capacity);
      if (load < chp.min_load_fraction || load <= 0.0) load = 0.0;
    }
    s.chp_on[t] = load > 0.0 ? 1 : 0;
    s.chp_load[t] = load;
    s.e_chp[t] = load * chp.elec_capacity;
    s.q_chp[t] = load * chp.heat_capacity;
    const double surplus = s.q_chp[t] - demand;
    if (surplus >= 0.0) {
      s.q_charge[t] = surplus;
    } else {
      const double residual = -surplus;
      s.q_discharge[t] = std::min({residual, store.max_discharge_rate, (soe - store.min_level) / dt});
      s.q_boiler[t] = residual - s.q_discharge[t];
      if (s.q_boiler[t] > assets.boiler.heat_capacity + 1e-9) {
        throw InfeasibleError("baseline rule leaves " + num(s.q_boiler[t] - assets.boiler.heat_capacity) +
                              " kW of heat unmet at step " + std::to_string(t));
      }
    }
    soe += (s.q_charge[t] - s.q_discharge[t]) * dt;
    soe = std::clamp(soe, store.min_level, store.capacity);
    s.soe[t] = soe;
    const double net = scenario.e_demand[t] - s.e_chp[t];
    s.e_import[t] = std::max(net, 0.0);
    s.e_export[t] = std::max(-net, 0.0);
  }
  evaluate(s, scenario, assets);
  return s;
}

SavingsReport compare(double baseline_cost, double optimised_cost, std::optional<double> actual_cost) {
  SavingsReport r;
  r.baseline_cost = baseline_cost;
  r.optimised_cost = optimised_cost;
  r.actual_cost = actual_cost;
  const double saving = baseline_cost - optimised_cost;
  if (saving <= 0.0) {
    r.reduction_pct = 0.0;
    r.warnings.push_back("baseline cost does not exceed optimised cost; reduction floored at 0%");
  } else {
    r.reduction_pct = 100.0 * saving / std::abs(baseline_cost);
  }
  r.value_realised_pct = std::numeric_limits<double>::quiet_NaN();
  if (actual_cost) {
    if (saving == 0.0) {
      r.warnings.push_back("value realised is undefined: baseline and optimised costs are equal");
    } else {
      r.value_realised_pct = 100.0 * (baseline_cost - *actual_cost) / saving;
    }
  }
  return r;
}

SavingsReport compare(const NetworkSchedule& baseline, const NetworkSchedule& optimised,
                      const NetworkSchedule* actual) {
  if (baseline.size() != optimised.size() || (actual && actual->size() != baseline.size())) {
    throw ValidationError("compare: schedules cover different horizons");
  }
  std::optional<double> a;
  if (actual) a = actual->costs.real();
  return compare(baseline.costs.real(), optimised.costs.real(), a);
}

nlohmann::json to_json(const CostBreakdown& c) {
  return {{"gas", c.gas},         {"import", c.import},         {"export_revenue", c.export_revenue},
          {"maintenance", c.maintenance}, {"artificial", c.artificial}, {"real", c.real()},
          {"total", c.total()}};
}

nlohmann::json to_json(const SavingsReport& r) {
  nlohmann::json j{{"baseline_cost", r.baseline_cost},
                   {"optimised_cost", r.optimised_cost},
                   {"reduction_pct", r.reduction_pct},
                   {"warnings", r.warnings}};
  if (r.actual_cost) {
    j["actual_cost"] = *r.actual_cost;
    j["value_realised_pct"] = std::isnan(r.value_realised_pct) ? nlohmann::json(nullptr)
                                                               : nlohmann::json(r.value_realised_pct);
  }
  return j;
}

}  // namespace energyopt::chp
