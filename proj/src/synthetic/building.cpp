#include <cmath>
#include <numbers>
#include <random>

#include "energyopt/synthetic.hpp"

namespace energyopt::synthetic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const ts::Duration kHalfHour{1800};

double hour_of(std::size_t t) { return static_cast<double>(t % 48) / 2.0; }

}  // namespace

BuildingScenario winter_building(std::uint64_t seed, std::size_t days) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const std::size_t n = days * 48;
  const auto start = ts::parse_iso8601("2022-01-10T00:00:00Z");  // a Monday
  std::vector<double> t_ext(n), irr(n), price(n), carbon(n), target(n);
  std::vector<bool> occupied(n);
  double day_offset = 0.0;
  double cloud = 1.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double h = hour_of(t);
    if (t % 48 == 0) {
      day_offset = 1.5 * normal(rng);
      cloud = 0.3 + 0.7 * unit(rng);
    }
    t_ext[t] = 4.0 + day_offset + 3.5 * std::sin(kTwoPi * (h - 9.0) / 24.0) + 0.3 * normal(rng);
    irr[t] = (h >= 8.0 && h < 16.0) ? 250.0 * cloud * std::sin(std::numbers::pi * (h - 8.0) / 8.0) : 0.0;
    price[t] = h < 7.0 ? 0.08 : (h >= 16.0 && h < 19.0 ? 0.30 : 0.18);
    carbon[t] = 190.0 + 50.0 * std::sin(kTwoPi * (h - 12.0) / 24.0) + (h >= 16.0 && h < 19.0 ? 40.0 : 0.0);
    const bool weekday = (t / 48) % 7 < 5;
    occupied[t] = weekday && h >= 8.0 && h < 18.0;
    target[t] = occupied[t] ? 21.0 : 16.0;
  }

  BuildingScenario s;
  s.params = {0.4, 40.0, 0.02, 1};
  s.hvac.q_max = 80.0;
  s.hvac.cop_heat = 3.0;
  s.comfort = {ts::TimeSeries(start, kHalfHour, target, "degC"), occupied, 1.0};
  s.inputs = {ts::TimeSeries(start, kHalfHour, t_ext, "degC"), ts::TimeSeries(start, kHalfHour, irr, "W/m2"),
              ts::TimeSeries(start, kHalfHour, price, "GBP/kWh"), ts::TimeSeries(start, kHalfHour, carbon, "gCO2/kWh")};
  s.thermostat = {0.5, 12, 10.0};
  s.t_int0 = 17.0;
  return s;
}

building::FitData rc_history(const building::RcModelParams& params, std::uint64_t seed, std::size_t steps,
                             double noise_sd) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> hold(2, 8);

  const auto start = ts::parse_iso8601("2022-01-03T00:00:00Z");
  std::vector<double> t_int(steps), t_ext(steps), irr(steps), q(steps);
  double x = 18.0;
  double level = 0.0;
  int remaining = 0;
  double drift = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    const double h = hour_of(t);
    if (remaining-- <= 0) {
      level = 6.0 * unit(rng);
      remaining = hold(rng);
    }
    drift = 0.95 * drift + 0.3 * normal(rng);
    t_ext[t] = 5.0 + 5.0 * std::sin(kTwoPi * (h - 9.0) / 24.0) + drift;
    irr[t] = (h >= 8.0 && h < 16.0) ? 40.0 * std::sin(std::numbers::pi * (h - 8.0) / 8.0) : 0.0;
    q[t] = level;
    t_int[t] = x + noise_sd * normal(rng);
    x = building::rc_step(x, t_ext[t], q[t], irr[t], params, 0.5);
  }
  return {ts::TimeSeries(start, kHalfHour, t_int, "degC"), ts::TimeSeries(start, kHalfHour, t_ext, "degC"),
          ts::TimeSeries(start, kHalfHour, irr, "W/m2"), ts::TimeSeries(start, kHalfHour, q, "kW")};
}

}  // namespace energyopt::synthetic
