#pragma once

#include <cstdint>

#include "energyopt/building/model.hpp"
#include "energyopt/building/mpc.hpp"
#include "energyopt/chp/network.hpp"
#include "energyopt/ems/dispatch.hpp"

// Seeded generators for the bundled demonstration data.
namespace energyopt::synthetic {

struct BuildingScenario {
  building::RcModelParams params;
  building::HvacSpec hvac;
  building::ComfortSpec comfort;
  building::ScenarioInputs inputs;
  building::ThermostatSpec thermostat;
  double t_int0 = 17.0;
};

struct MeterPortfolio {
  std::vector<ts::MeterRecord> meters;  // labelled with contract, sector, district
  ts::TimeSeries temperature;           // degC, aligned with the meters
};

/// Half-hourly consumption for offices and homes from a Monday in January,
/// with heating load, a few short gaps, occasional spikes, and one meter
/// that stops reporting halfway through.
MeterPortfolio meter_portfolio(std::uint64_t seed, std::size_t meters = 12, std::size_t days = 28);

/// Half-hourly winter scenario starting on a Monday: office occupancy
/// 08:00-18:00 on weekdays, a heat pump on a three-rate tariff.
BuildingScenario winter_building(std::uint64_t seed, std::size_t days = 7);

/// Excited operating history generated by `params` with Gaussian
/// measurement noise on the indoor temperature. Half-hourly.
building::FitData rc_history(const building::RcModelParams& params, std::uint64_t seed, std::size_t steps,
                             double noise_sd);

struct ChpSite {
  chp::NetworkScenario scenario;
  chp::Assets assets;
  chp::BaselineRule rule;
};

/// Heat network with one CHP, one boiler and a thermal store. Heat demand
/// stays above the CHP minimum load so the fixed-window rule never cycles.
ChpSite chp_site(std::uint64_t seed, std::size_t days = 2, ts::Duration resolution = ts::Duration{1800},
                 bool with_store = true);

struct EmsSite {
  ts::TimeSeries irradiance;    // W/m2
  ts::TimeSeries ambient_temp;  // degC
  ts::TimeSeries load;          // kWh per step
  ts::TimeSeries carbon;        // g/kWh
  ems::PvSpec pv;
  ems::BatterySpec battery;
  double base_price = 0.15;
  double peak_multiplier = 2.0;
  double export_price = 0.05;
};

/// Commercial site with rooftop PV and a 100 kWh battery, starting on a
/// Monday in spring. Cloudiness varies day to day.
EmsSite ems_site(std::uint64_t seed, std::size_t days = 2, ts::Duration resolution = ts::Duration{1800});

}  // namespace energyopt::synthetic
