#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "energyopt/milp/solver.hpp"
#include "energyopt/timeseries/metrics.hpp"
#include "energyopt/timeseries/time_series.hpp"

namespace energyopt::ems {

using ts::TimeSeries;

struct PvSpec {
  double dc_rating = 1.0;               // kW
  double derate_coeff = 0.004;          // fraction per degC above ref_temp
  double ref_temp = 25.0;               // degC
  double system_efficiency = 0.9;
  double irradiance_at_rating = 1000.0;  // W/m2

  void validate() const;
};

struct BatterySpec {
  double capacity = 100.0;  // kWh
  double soc_min = 10.0;    // percent
  double soc_max = 90.0;    // percent
  double p_max = 50.0;      // kW, both directions
  double eta_c = 0.95;
  double eta_d = 0.95;
  std::optional<double> cycle_limit;  // cycles over the horizon
  double initial_soc = 50.0;          // percent

  void validate() const;
};

struct Tariff {
  std::string name;
  TimeSeries import_price;  // per kWh
  double export_price = 0.0;
  TimeSeries carbon_intensity;  // g/kWh
  double w_carbon = 0.0;        // objective weight per g

  void validate() const;
};

/// All energies are kWh per step; soc[t] is the state of charge (percent)
/// at the end of step t.
struct DispatchResult {
  std::vector<double> pv;
  std::vector<double> load;
  std::vector<double> charge;
  std::vector<double> discharge;
  std::vector<double> import;
  std::vector<double> export_;
  std::vector<double> soc;
  double cost = 0.0;       // import spend less export revenue
  double carbon = 0.0;     // g, imports only
  double objective = 0.0;  // cost + w_carbon * carbon
  double cycles = 0.0;
  milp::SolveStatus status = milp::SolveStatus::optimal;
  double gap = 0.0;

  std::size_t size() const { return load.size(); }
};

/// Energy per step. Output is 0 wherever irradiance is <= 0 and never
/// exceeds dc_rating * step.
TimeSeries simulate_pv(const TimeSeries& irradiance, const TimeSeries& ambient_temp, const PvSpec& spec);

/// One step of the battery twin: soc + (eta_c * charge - discharge / eta_d) * 100 / capacity.
/// Throws ValidationError when the result leaves [soc_min, soc_max] or an
/// energy exceeds p_max * step_hours.
double battery_step(double soc, double charge, double discharge, const BatterySpec& spec, double step_hours);

/// Charge from any PV surplus and discharge into any deficit, within SOC,
/// power and cycle limits; the grid takes the rest.
DispatchResult baseline_dispatch(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& battery,
                                 const Tariff& tariff);

/// Optimal dispatch where the battery only charges from PV surplus and only
/// discharges into local deficit. With `peak_threshold`, import per step is
/// capped at that many kWh. Throws InfeasibleError naming the first step
/// that cannot be held under the cap.
DispatchResult optimise_self_consumption(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& battery,
                                         const Tariff& tariff, std::optional<double> peak_threshold = std::nullopt,
                                         const milp::SolveOptions& opts = {});

/// Optimal dispatch with grid charging allowed (price arbitrage).
DispatchResult optimise_cost(const TimeSeries& pv, const TimeSeries& load, const BatterySpec& battery,
                             const Tariff& tariff, std::optional<double> peak_threshold = std::nullopt,
                             const milp::SolveOptions& opts = {});

/// Fills cost, carbon, objective and cycles from the energies in `r`.
void evaluate(DispatchResult& r, const Tariff& tariff, const BatterySpec& battery);

/// Largest |load - (pv + import - export + discharge - charge)| over all steps.
double max_balance_residual(const DispatchResult& r);

/// Flat, peak/off-peak (peak 16:00-19:00 at base * multiplier), three-tier
/// (adds a shoulder 07:00-16:00 and 19:00-22:00 at the midpoint price) and
/// weekday-only peak (peak/off-peak with Saturday and Sunday at base).
/// Steps are classed by their UTC start time on the carbon series' grid.
std::vector<Tariff> tariff_scenarios(double base_price, double peak_multiplier, double export_price,
                                     const TimeSeries& carbon, double w_carbon = 0.0);

enum class Strategy { baseline, self_consumption, cost };
std::string to_string(Strategy s);

DispatchResult dispatch(Strategy s, const TimeSeries& pv, const TimeSeries& load, const BatterySpec& battery,
                        const Tariff& tariff, const milp::SolveOptions& opts = {});

struct TwinEvaluation {
  ts::AccuracyReport accuracy;
  double predicted_cost = 0.0;
  double measured_cost = 0.0;
  double cost_impact_pct = 0.0;  // NaN when the measured cost is zero
};

/// Scores predicted against measured PV and compares the cost of running
/// `strategy` on each, both settled against the same load and tariff.
TwinEvaluation evaluate_twin(const TimeSeries& predicted_pv, const TimeSeries& measured_pv, const TimeSeries& load,
                             const BatterySpec& battery, const Tariff& tariff,
                             Strategy strategy = Strategy::baseline, const milp::SolveOptions& opts = {});

nlohmann::json summary_json(const DispatchResult& r);
nlohmann::json to_json(const TwinEvaluation& e);

}  // namespace energyopt::ems
