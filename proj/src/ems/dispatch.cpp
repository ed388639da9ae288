#include "energyopt/ems/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "energyopt/error.hpp"

namespace energyopt::ems {

namespace {

using milp::Relation;

enum Slot : std::size_t { kCharge, kDischarge, kImport, kExport, kSoc, kChargeMode, kImportMode, kSlots };

std::size_t var(std::size_t t, Slot s) { return t * kSlots + s; }

std::string at(const char* name, std::size_t t) { return std::string(name) + "[" + std::to_string(t) + "]"; }

void require_finite(const TimeSeries& s, const std::string& what) {
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (!std::isfinite(s[t])) throw ValidationError(what + ": missing or non-finite value at step " + std::to_string(t));
  }
}

void check_inputs(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& battery, const Tariff& tariff) {
  if (load.empty()) throw ValidationError("dispatch: no steps");
  ts::require_aligned(pv, load, "dispatch: pv vs load");
  ts::require_aligned(tariff.import_price, load, "dispatch: tariff vs load");
  require_finite(pv, "dispatch: pv");
  require_finite(load, "dispatch: load");
  for (std::size_t t = 0; t < pv.size(); ++t) {
    if (pv[t] < 0.0) throw ValidationError("dispatch: negative pv at step " + std::to_string(t));
  }
  battery.validate();
  tariff.validate();
}

DispatchResult empty_result(const TimeSeries& pv, const TimeSeries& load) {
  DispatchResult r;
  const std::size_t n = load.size();
  r.pv = pv.values;
  r.load = load.values;
  r.charge.assign(n, 0.0);
  r.discharge.assign(n, 0.0);
  r.import.assign(n, 0.0);
  r.export_.assign(n, 0.0);
  r.soc.assign(n, 0.0);
  return r;
}

// Grid flows that close the balance for the battery flows already in `r`.
void settle_grid(DispatchResult& r) {
  for (std::size_t t = 0; t < r.size(); ++t) {
    const double net = r.load[t] - r.pv[t] + r.charge[t] - r.discharge[t];
    r.import[t] = std::max(net, 0.0);
    r.export_[t] = std::max(-net, 0.0);
  }
}

struct Limits {
  double charge;
  double discharge;
};

// Per-step energy caps; self-consumption also ties the battery to the local
// surplus or deficit.
Limits step_limits(const BatterySpec& b, double dt, double pv, double load, bool self_consumption) {
  Limits l{b.p_max * dt, b.p_max * dt};
  if (self_consumption) {
    l.charge = std::min(l.charge, std::max(pv - load, 0.0));
    l.discharge = std::min(l.discharge, std::max(load - pv, 0.0));
  }
  return l;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Names the first step a peak cap cannot hold. Charging as much as allowed
// at every opportunity leaves the most energy for later, so a greedy pass
// finds the earliest unavoidable violation.
std::string diagnose_peak(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& b, double threshold,
                          bool self_consumption) {
  const double dt = load.step_hours();
  double soc = b.initial_soc;
  for (std::size_t t = 0; t < load.size(); ++t) {
    const Limits lim = step_limits(b, dt, pv[t], load[t], self_consumption);
    const double need = load[t] - pv[t] - threshold;
    if (need > 0.0) {
      const double available = std::max(0.0, (soc - b.soc_min) * b.capacity * b.eta_d / 100.0);
      if (need > std::min(lim.discharge, available) + 1e-9) {
        return "peak threshold " + num(threshold) + " kWh cannot be held at step " + std::to_string(t) + " (" +
               ts::format_iso8601(load.time_at(t)) + "): deficit " + num(load[t] - pv[t]) + " kWh, battery can supply " +
               num(std::min(lim.discharge, available)) + " kWh";
      }
      soc -= need / b.eta_d * 100.0 / b.capacity;
    } else {
      // Spare import headroom or PV surplus can charge.
      const double headroom = std::max(0.0, (b.soc_max - soc) * b.capacity / (100.0 * b.eta_c));
      const double source = self_consumption ? std::max(pv[t] - load[t], 0.0) : -need;
      soc += std::min({lim.charge, headroom, source}) * b.eta_c * 100.0 / b.capacity;
    }
  }
  return "peak threshold " + num(threshold) + " kWh cannot be held over the horizon";
}

milp::MilpProblem build(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& b, const Tariff& tariff,
                        std::optional<double> peak, bool self_consumption) {
  const std::size_t n = load.size();
  const double dt = load.step_hours();
  const double kc = b.eta_c * 100.0 / b.capacity;
  const double kd = 100.0 / (b.eta_d * b.capacity);
  milp::MilpProblem p;
  for (std::size_t t = 0; t < n; ++t) {
    const Limits lim = step_limits(b, dt, pv[t], load[t], self_consumption);
    const double import_price = tariff.import_price[t] + tariff.w_carbon * tariff.carbon_intensity[t];
    p.add_variable(at("charge", t), 0.0, lim.charge);
    p.add_variable(at("discharge", t), 0.0, lim.discharge);
    p.add_variable(at("import", t), 0.0, peak ? *peak : milp::kInf, import_price);
    p.add_variable(at("export", t), 0.0, milp::kInf, -tariff.export_price);
    p.add_variable(at("soc", t), b.soc_min, b.soc_max);
    p.add_binary(at("charging", t));
    p.add_binary(at("importing", t));
  }
  for (std::size_t t = 0; t < n; ++t) {
    const Limits lim = step_limits(b, dt, pv[t], load[t], self_consumption);
    p.add_constraint(at("balance", t),
                     {{var(t, kImport), 1.0}, {var(t, kExport), -1.0}, {var(t, kDischarge), 1.0},
                      {var(t, kCharge), -1.0}},
                     Relation::equal, load[t] - pv[t]);
    std::vector<milp::Term> soc{{var(t, kSoc), 1.0}, {var(t, kCharge), -kc}, {var(t, kDischarge), kd}};
    double rhs = 0.0;
    if (t == 0) {
      rhs = b.initial_soc;
    } else {
      soc.push_back({var(t - 1, kSoc), -1.0});
    }
    p.add_constraint(at("soc", t), std::move(soc), Relation::equal, rhs);

    p.add_constraint(at("charge_mode", t), {{var(t, kCharge), 1.0}, {var(t, kChargeMode), -lim.charge}},
                     Relation::less_equal, 0.0);
    p.add_constraint(at("discharge_mode", t), {{var(t, kDischarge), 1.0}, {var(t, kChargeMode), lim.discharge}},
                     Relation::less_equal, lim.discharge);
    // The balance bounds each grid flow given the mode.
    const double max_import = std::max(load[t], 0.0) + lim.charge;
    const double max_export = pv[t] + lim.discharge + std::max(-load[t], 0.0);
    p.add_constraint(at("import_mode", t), {{var(t, kImport), 1.0}, {var(t, kImportMode), -max_import}},
                     Relation::less_equal, 0.0);
    p.add_constraint(at("export_mode", t), {{var(t, kExport), 1.0}, {var(t, kImportMode), max_export}},
                     Relation::less_equal, max_export);
  }
  if (b.cycle_limit) {
    std::vector<milp::Term> throughput;
    for (std::size_t t = 0; t < n; ++t) {
      throughput.push_back({var(t, kCharge), 1.0});
      throughput.push_back({var(t, kDischarge), 1.0});
    }
    p.add_constraint("cycles", std::move(throughput), Relation::less_equal, 2.0 * b.capacity * *b.cycle_limit);
  }
  return p;
}

DispatchResult optimise(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& b, const Tariff& tariff,
                        std::optional<double> peak, const milp::SolveOptions& opts, bool self_consumption) {
  check_inputs(pv, load, b, tariff);
  if (peak && !(*peak >= 0.0)) throw ValidationError("dispatch: peak threshold must be >= 0");
  const auto problem = build(pv, load, b, tariff, peak, self_consumption);
  const auto sol = milp::solve_milp(problem, opts);
  if (sol.status == milp::SolveStatus::infeasible) {
    throw InfeasibleError(peak ? diagnose_peak(pv, load, b, *peak, self_consumption)
                               : std::string("battery dispatch problem is infeasible"));
  }
  if (!sol.has_values()) {
    throw SolverLimitError("battery dispatch: solver stopped (" + milp::to_string(sol.status) +
                           ") without a schedule");
  }
  auto r = empty_result(pv, load);
  const auto& x = sol.values;
  const double dt = load.step_hours();
  double soc = b.initial_soc;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const Limits lim = step_limits(b, dt, pv[t], load[t], self_consumption);
    // Take the battery flow the mode binary allows and rebuild SOC and the
    // grid flows from it, so complementarity and the balance hold exactly.
    const bool charging = x[var(t, kChargeMode)] > 0.5;
    r.charge[t] = charging ? std::clamp(x[var(t, kCharge)], 0.0, lim.charge) : 0.0;
    r.discharge[t] = charging ? 0.0 : std::clamp(x[var(t, kDischarge)], 0.0, lim.discharge);
    if (r.charge[t] < 1e-12) r.charge[t] = 0.0;
    if (r.discharge[t] < 1e-12) r.discharge[t] = 0.0;
    soc += (b.eta_c * r.charge[t] - r.discharge[t] / b.eta_d) * 100.0 / b.capacity;
    soc = std::clamp(soc, b.soc_min, b.soc_max);
    r.soc[t] = soc;
  }
  settle_grid(r);
  r.status = sol.status;
  r.gap = sol.gap;
  evaluate(r, tariff, b);
  return r;
}

}  // namespace

void PvSpec::validate() const {
  if (!(dc_rating > 0.0)) throw ValidationError("PV: dc_rating must be positive");
  if (!(system_efficiency > 0.0 && system_efficiency <= 1.0)) {
    throw ValidationError("PV: system_efficiency must lie in (0, 1]");
  }
  if (!(derate_coeff >= 0.0)) throw ValidationError("PV: derate_coeff must be >= 0");
  if (!(irradiance_at_rating > 0.0)) throw ValidationError("PV: irradiance_at_rating must be positive");
  if (!std::isfinite(ref_temp)) throw ValidationError("PV: ref_temp must be finite");
}

void BatterySpec::validate() const {
  if (!(capacity > 0.0)) throw ValidationError("battery: capacity must be positive");
  if (!(soc_min >= 0.0 && soc_min <= initial_soc && initial_soc <= soc_max && soc_max <= 100.0)) {
    throw ValidationError("battery: need 0 <= soc_min <= initial_soc <= soc_max <= 100");
  }
  if (!(p_max >= 0.0)) throw ValidationError("battery: p_max must be >= 0");
  if (!(eta_c > 0.0 && eta_c <= 1.0) || !(eta_d > 0.0 && eta_d <= 1.0)) {
    throw ValidationError("battery: efficiencies must lie in (0, 1]");
  }
  if (cycle_limit && !(*cycle_limit >= 0.0)) throw ValidationError("battery: cycle_limit must be >= 0");
}

void Tariff::validate() const {
  if (import_price.empty()) throw ValidationError("tariff '" + name + "': no import prices");
  ts::require_aligned(import_price, carbon_intensity, "tariff '" + name + "': import price vs carbon");
  for (std::size_t t = 0; t < import_price.size(); ++t) {
    if (!(import_price[t] >= 0.0)) throw ValidationError("tariff '" + name + "': import price must be >= 0");
    if (!(carbon_intensity[t] >= 0.0)) throw ValidationError("tariff '" + name + "': carbon intensity must be >= 0");
  }
  if (!(export_price >= 0.0)) throw ValidationError("tariff '" + name + "': export price must be >= 0");
  if (!(w_carbon >= 0.0)) throw ValidationError("tariff '" + name + "': w_carbon must be >= 0");
}

TimeSeries simulate_pv(const TimeSeries& irradiance, const TimeSeries& ambient_temp, const PvSpec& spec) {
  spec.validate();
  ts::require_aligned(irradiance, ambient_temp, "simulate_pv: irradiance vs ambient temperature");
  require_finite(irradiance, "simulate_pv: irradiance");
  require_finite(ambient_temp, "simulate_pv: ambient temperature");
  const double dt = irradiance.step_hours();
  std::vector<double> out(irradiance.size(), 0.0);
  for (std::size_t t = 0; t < out.size(); ++t) {
    const double irr = irradiance[t];
    if (irr <= 0.0) continue;
    const double derate = std::max(0.0, 1.0 - spec.derate_coeff * std::max(0.0, ambient_temp[t] - spec.ref_temp));
    const double e = spec.dc_rating * (irr / spec.irradiance_at_rating) * spec.system_efficiency * derate * dt;
    out[t] = std::min(e, spec.dc_rating * dt);
  }
  return TimeSeries(irradiance.start, irradiance.resolution, std::move(out), "kWh");
}

double battery_step(double soc, double charge, double discharge, const BatterySpec& spec, double step_hours) {
  spec.validate();
  if (!(charge >= 0.0) || !(discharge >= 0.0)) throw ValidationError("battery_step: energies must be >= 0");
  const double cap = spec.p_max * step_hours * (1.0 + 1e-12);
  if (charge > cap || discharge > cap) {
    throw ValidationError("battery_step: energy exceeds p_max over the step (" + num(std::max(charge, discharge)) +
                          " > " + num(spec.p_max * step_hours) + " kWh)");
  }
  const double next = soc + (spec.eta_c * charge - discharge / spec.eta_d) * 100.0 / spec.capacity;
  if (next < spec.soc_min - 1e-9 || next > spec.soc_max + 1e-9) {
    throw ValidationError("battery_step: SOC " + num(next) + "% outside [" + num(spec.soc_min) + ", " +
                          num(spec.soc_max) + "]");
  }
  return next;
}

DispatchResult baseline_dispatch(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& b,
                                 const Tariff& tariff) {
  check_inputs(pv, load, b, tariff);
  const double dt = load.step_hours();
  auto r = empty_result(pv, load);
  double budget = b.cycle_limit ? 2.0 * b.capacity * *b.cycle_limit : milp::kInf;
  double soc = b.initial_soc;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const double surplus = pv[t] - load[t];
    if (surplus > 0.0) {
      const double headroom = std::max(0.0, (b.soc_max - soc) * b.capacity / (100.0 * b.eta_c));
      r.charge[t] = std::min({surplus, b.p_max * dt, headroom, budget});
    } else if (surplus < 0.0) {
      const double available = std::max(0.0, (soc - b.soc_min) * b.capacity * b.eta_d / 100.0);
      r.discharge[t] = std::min({-surplus, b.p_max * dt, available, budget});
    }
    budget -= r.charge[t] + r.discharge[t];
    soc = std::clamp(battery_step(soc, r.charge[t], r.discharge[t], b, dt), b.soc_min, b.soc_max);
    r.soc[t] = soc;
  }
  settle_grid(r);
  evaluate(r, tariff, b);
  return r;
}

DispatchResult optimise_self_consumption(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& battery,
                                         const Tariff& tariff, std::optional<double> peak_threshold,
                                         const milp::SolveOptions& opts) {
  return optimise(pv, load, battery, tariff, peak_threshold, opts, true);
}

DispatchResult optimise_cost(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& battery,
                             const Tariff& tariff, std::optional<double> peak_threshold,
                             const milp::SolveOptions& opts) {
  return optimise(pv, load, battery, tariff, peak_threshold, opts, false);
}

void evaluate(DispatchResult& r, const Tariff& tariff, const BatterySpec& battery) {
  r.cost = 0.0;
  r.carbon = 0.0;
  double throughput = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    r.cost += tariff.import_price[t] * r.import[t] - tariff.export_price * r.export_[t];
    r.carbon += tariff.carbon_intensity[t] * r.import[t];
    throughput += r.charge[t] + r.discharge[t];
  }
  r.objective = r.cost + tariff.w_carbon * r.carbon;
  r.cycles = throughput / (2.0 * battery.capacity);
}

double max_balance_residual(const DispatchResult& r) {
  double worst = 0.0;
  for (std::size_t t = 0; t < r.size(); ++t) {
    const double supplied = r.pv[t] + r.import[t] - r.export_[t] + r.discharge[t] - r.charge[t];
    worst = std::max(worst, std::abs(r.load[t] - supplied));
  }
  return worst;
}

std::vector<Tariff> tariff_scenarios(double base_price, double peak_multiplier, double export_price,
                                     const TimeSeries& carbon, double w_carbon) {
  if (!(base_price >= 0.0)) throw ValidationError("tariff_scenarios: base price must be >= 0");
  if (!(peak_multiplier >= 1.0)) throw ValidationError("tariff_scenarios: peak multiplier must be >= 1");
  if (carbon.empty()) throw ValidationError("tariff_scenarios: empty carbon series");
  const double peak = base_price * peak_multiplier;
  const double shoulder = 0.5 * (base_price + peak);
  const std::size_t n = carbon.size();
  std::vector<double> flat(n, base_price), peak_off(n), tiered(n), weekday(n);
  for (std::size_t t = 0; t < n; ++t) {
    const auto time = carbon.time_at(t);
    const int h = ts::hour_of_day(time);
    const bool in_peak = h >= 16 && h < 19;
    const bool in_shoulder = (h >= 7 && h < 16) || (h >= 19 && h < 22);
    const int wd = ts::weekday(time);
    const bool weekend = wd == 0 || wd == 6;
    peak_off[t] = in_peak ? peak : base_price;
    tiered[t] = in_peak ? peak : (in_shoulder ? shoulder : base_price);
    weekday[t] = in_peak && !weekend ? peak : base_price;
  }
  const auto make = [&](const char* name, std::vector<double> prices) {
    Tariff tariff{name, TimeSeries(carbon.start, carbon.resolution, std::move(prices)), export_price, carbon,
                  w_carbon};
    tariff.validate();
    return tariff;
  };
  return {make("flat", std::move(flat)), make("peak_offpeak", std::move(peak_off)),
          make("three_tier", std::move(tiered)), make("weekday_peak", std::move(weekday))};
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::baseline: return "baseline";
    case Strategy::self_consumption: return "self_consumption";
    case Strategy::cost: return "cost";
  }
  return "unknown";
}

DispatchResult dispatch(Strategy s, const TimeSeries& pv, const TimeSeries& load, const BatterySpec& battery,
                        const Tariff& tariff, const milp::SolveOptions& opts) {
  switch (s) {
    case Strategy::baseline: return baseline_dispatch(pv, load, battery, tariff);
    case Strategy::self_consumption: return optimise_self_consumption(pv, load, battery, tariff, std::nullopt, opts);
    case Strategy::cost: return optimise_cost(pv, load, battery, tariff, std::nullopt, opts);
  }
  throw ValidationError("dispatch: unknown strategy");
}

TwinEvaluation evaluate_twin(const TimeSeries& predicted_pv, const TimeSeries& measured_pv, const TimeSeries& load,
                             const BatterySpec& battery, const Tariff& tariff, Strategy strategy,
                             const milp::SolveOptions& opts) {
  ts::require_aligned(predicted_pv, measured_pv, "evaluate_twin: predicted vs measured");
  TwinEvaluation e;
  e.accuracy = ts::score(measured_pv, predicted_pv);
  e.predicted_cost = dispatch(strategy, predicted_pv, load, battery, tariff, opts).objective;
  e.measured_cost = dispatch(strategy, measured_pv, load, battery, tariff, opts).objective;
  e.cost_impact_pct = e.measured_cost == 0.0
                          ? std::numeric_limits<double>::quiet_NaN()
                          : 100.0 * std::abs(e.predicted_cost - e.measured_cost) / std::abs(e.measured_cost);
  return e;
}

nlohmann::json summary_json(const DispatchResult& r) {
  return {{"cost", r.cost},     {"carbon_g", r.carbon}, {"objective", r.objective},
          {"cycles", r.cycles}, {"status", milp::to_string(r.status)}, {"gap", r.gap}};
}

nlohmann::json to_json(const TwinEvaluation& e) {
  nlohmann::json impact = nullptr;
  if (std::isfinite(e.cost_impact_pct)) impact = e.cost_impact_pct;
  return {{"accuracy", ts::to_json(e.accuracy)},
          {"predicted_cost", e.predicted_cost},
          {"measured_cost", e.measured_cost},
          {"cost_impact_pct", impact}};
}

}  // namespace energyopt::ems
