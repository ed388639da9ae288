#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "energyopt/milp/solver.hpp"
#include "energyopt/timeseries/time_series.hpp"

namespace energyopt::chp {

using ts::TimeSeries;

struct ChpSpec {
  double elec_capacity = 1.0;  // kW
  double heat_capacity = 1.0;  // kW
  double gas_per_elec = 2.5;   // kWh gas per kWh electricity, linear in load
  double min_load_fraction = 0.0;
  double maintenance_cost_per_hour = 0.0;  // charged while on

  void validate() const;
};

struct BoilerSpec {
  double heat_capacity = 0.0;  // kW
  double efficiency = 0.9;

  void validate() const;
};

struct ThermalStoreSpec {
  double capacity = 0.0;   // kWh
  double min_level = 0.0;  // kWh
  double max_charge_rate = 0.0;     // kW
  double max_discharge_rate = 0.0;  // kW
  double initial_soe = 0.0;         // kWh

  void validate() const;
};

struct Assets {
  ChpSpec chp;
  BoilerSpec boiler;
  std::optional<ThermalStoreSpec> store;  // absent means no storage

  void validate() const;
};

struct ArtificialCosts {
  double import_pref = 0.0;  // per kWh imported
  double chp_pref = 0.0;     // per kWh of CHP electricity
  double boiler_pref = 0.0;  // per kWh of boiler heat
  double restart = 0.0;      // per restart
};

struct NetworkScenario {
  TimeSeries e_demand;  // kW
  TimeSeries q_demand;  // kW
  TimeSeries p_gas;     // per kWh
  TimeSeries p_import;
  TimeSeries p_export;
  int max_restarts_per_day = 1;
  ArtificialCosts artificial;
  bool initial_on = false;

  void validate() const;
  std::size_t size() const { return e_demand.size(); }
  double step_hours() const { return e_demand.step_hours(); }
};

struct CostBreakdown {
  double gas = 0.0;
  double import = 0.0;
  double export_revenue = 0.0;
  double maintenance = 0.0;
  double artificial = 0.0;

  double real() const { return gas + import - export_revenue + maintenance; }
  double total() const { return real() + artificial; }
};

/// Per-step decisions. soe[t] is the store level at the end of step t.
struct NetworkSchedule {
  std::vector<int> chp_on;
  std::vector<double> chp_load;
  std::vector<double> e_chp;
  std::vector<double> q_chp;
  std::vector<double> e_import;
  std::vector<double> e_export;
  std::vector<double> q_boiler;
  std::vector<double> q_charge;
  std::vector<double> q_discharge;
  std::vector<double> soe;
  CostBreakdown costs;
  std::map<long long, int> restarts_per_day;  // UTC day index -> count
  milp::SolveStatus status = milp::SolveStatus::optimal;
  double gap = 0.0;

  std::size_t size() const { return chp_on.size(); }
};

/// Number of variables per step: S, R, then load, E_import, E_export,
/// Q_boiler, Q_charge, Q_discharge, SOE.
inline constexpr std::size_t kVarsPerStep = 9;

milp::MilpProblem build_problem(const NetworkScenario& scenario, const Assets& assets);

/// Solves the scheduling MILP. Throws InfeasibleError with the first
/// aggregate that cannot be met, or SolverLimitError without an incumbent.
NetworkSchedule optimise(const NetworkScenario& scenario, const Assets& assets, const milp::SolveOptions& opts = {});

/// Restart counts per UTC day and the cost breakdown, both derived from the
/// decisions in `s`.
void evaluate(NetworkSchedule& s, const NetworkScenario& scenario, const Assets& assets);

/// Largest |balance residual| in kW over both balances and all steps.
double max_balance_residual(const NetworkSchedule& s, const NetworkScenario& scenario);

/// "Run at `load` from `start_hour` to `end_hour` (UTC, end exclusive, 24 =
/// midnight)". Load is throttled to what heat demand plus store charging can
/// absorb, and the CHP is switched off if that falls below its minimum load.
struct BaselineRule {
  double start_hour = 7.0;
  double end_hour = 24.0;
  double load = 1.0;
};

NetworkSchedule baseline_schedule(const NetworkScenario& scenario, const Assets& assets, const BaselineRule& rule);

struct SavingsReport {
  double baseline_cost = 0.0;
  double optimised_cost = 0.0;
  double reduction_pct = 0.0;
  std::optional<double> actual_cost;
  double value_realised_pct = 0.0;  // NaN when undefined
  std::vector<std::string> warnings;
};

/// Real-cost reduction from baseline to optimised, and with an actual
/// schedule the share of the achievable saving that was realised.
SavingsReport compare(double baseline_cost, double optimised_cost, std::optional<double> actual_cost = std::nullopt);
SavingsReport compare(const NetworkSchedule& baseline, const NetworkSchedule& optimised,
                      const NetworkSchedule* actual = nullptr);

nlohmann::json to_json(const CostBreakdown& c);
nlohmann::json to_json(const SavingsReport& r);

}  // namespace energyopt::chp
