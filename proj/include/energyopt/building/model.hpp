#pragma once

#include <functional>
#include <string>
#include <vector>

#include "energyopt/milp/problem.hpp"
#include "energyopt/timeseries/metrics.hpp"
#include "energyopt/timeseries/time_series.hpp"

namespace energyopt::building {

using ts::TimeSeries;

/// First-order (1R1C) zone model. R in degC/kW, C in kWh/degC, p in kW per W/m2.
struct RcModelParams {
  double R = 1.0;
  double C = 1.0;
  double p = 0.0;
  int order = 1;

  void validate() const;
  double time_constant_hours() const { return R * C; }
};

struct HvacSpec {
  double q_max = 0.0;     // kW heating
  double cop_heat = 1.0;  // E_HVAC = Q_HVAC / cop_heat
  // Per-step availability; empty means always available.
  std::vector<bool> allowed;
  // Optional cooling, off when q_cool_max is 0.
  double q_cool_max = 0.0;
  double cop_cool = 1.0;

  void validate() const;
  bool available(std::size_t t) const { return allowed.empty() || allowed.at(t); }
  double heat_limit(std::size_t t) const { return available(t) ? q_max : 0.0; }
  double cool_limit(std::size_t t) const { return available(t) ? q_cool_max : 0.0; }
};

struct ComfortSpec {
  TimeSeries target;           // degC
  std::vector<bool> occupied;  // same length as target
  double band = 1.0;           // degC half-width

  void validate() const;
};

struct ObjectiveWeights {
  double cost = 1.0;
  double carbon = 0.0;
  double comfort = 1.0;

  void validate() const;
  bool operator==(const ObjectiveWeights&) const = default;
};

struct ScenarioInputs {
  TimeSeries t_ext;       // degC
  TimeSeries irradiance;  // W/m2
  TimeSeries price;       // currency per kWh
  TimeSeries carbon;      // gCO2 per kWh

  void validate() const;
  std::size_t size() const { return t_ext.size(); }
  double step_hours() const { return t_ext.step_hours(); }
  ScenarioInputs slice(std::size_t from, std::size_t to) const;
};

/// T_i[t] is the zone temperature at the end of step t; the comfort criterion
/// compares it with target[t] when step t is occupied.
struct BuildingSchedule {
  TimeSeries q_hvac;  // kW heating
  TimeSeries q_cool;  // kW cooling, all zero unless cooling is configured
  TimeSeries t_int;
  double cost = 0.0;
  double carbon = 0.0;
  double comfort_criterion = 1.0;
  double objective = 0.0;
  milp::SolveStatus status = milp::SolveStatus::optimal;
};

/// One explicit-Euler step; q is net heat input (heating minus cooling).
double rc_step(double t_int, double t_ext, double q, double irradiance, const RcModelParams& params, double dt_hours);

/// Fraction of occupied steps with |T_i - target| <= band; 1 when nothing is occupied.
double comfort_criterion(const TimeSeries& t_int, const ComfortSpec& comfort);

/// Fills cost, carbon and comfort_criterion from q_hvac, q_cool and t_int.
void evaluate(BuildingSchedule& s, const HvacSpec& hvac, const ComfortSpec& comfort, const ScenarioInputs& inputs);

/// Heating (positive) or cooling (negative) power for step t given the
/// temperature at the start of the step.
using HvacPolicy = std::function<double(std::size_t t, double t_int)>;

BuildingSchedule simulate(const RcModelParams& params, const HvacPolicy& policy, const HvacSpec& hvac,
                          const ComfortSpec& comfort, const ScenarioInputs& inputs, double t_int0,
                          std::size_t steps);

/// Hysteresis thermostat: full heat below target - deadband, off above
/// target + deadband. It runs during occupied steps and the `preheat_steps`
/// before each occupied period; otherwise it only guards `setback`.
struct ThermostatSpec {
  double deadband = 0.5;
  std::size_t preheat_steps = 0;
  double setback = -1e9;
};

HvacPolicy thermostat_policy(const HvacSpec& hvac, const ComfortSpec& comfort, const ThermostatSpec& spec = {});

struct FitData {
  TimeSeries t_int;
  TimeSeries t_ext;
  TimeSeries irradiance;
  TimeSeries q_hvac;  // net heat input, kW
};

struct FitResult {
  RcModelParams params;
  ts::AccuracyReport report;  // one-step-ahead temperature predictions, in sample
};

/// Least-squares fit of the one-step-ahead model. Seeds (R, C, p) from the
/// linear reparameterisation, then refines with alternating golden-section
/// searches over log R and log C, solving for p >= 0 in closed form.
FitResult fit_parameters(const FitData& data);

}  // namespace energyopt::building
