#include <cmath>
#include <numbers>
#include <random>

#include "energyopt/synthetic.hpp"

namespace energyopt::synthetic {

namespace {

double bump(double h, double centre, double width) {
  const double z = (h - centre) / width;
  return std::exp(-0.5 * z * z);
}

}  // namespace

EmsSite ems_site(std::uint64_t seed, std::size_t days, ts::Duration resolution) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto per_day = static_cast<std::size_t>(86400 / resolution.count());
  const std::size_t n = days * per_day;
  const double dt = static_cast<double>(resolution.count()) / 3600.0;
  // Spring week from a Monday, so the weekday-only tariff sees a weekend.
  const auto start = ts::parse_iso8601("2022-04-04T00:00:00Z");
  const double load_scale = 0.7 + 0.6 * unit(rng);
  std::vector<double> irr(n), temp(n), load(n), carbon(n);
  double clouds = 1.0;
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t day = t / per_day;
    const double h = 24.0 * static_cast<double>(t % per_day) / static_cast<double>(per_day);
    if (t % per_day == 0) clouds = 0.35 + 0.65 * unit(rng);
    const double sun = h > 6.0 && h < 20.0 ? std::sin(std::numbers::pi * (h - 6.0) / 14.0) : 0.0;
    irr[t] = sun > 0.0 ? std::max(0.0, 850.0 * clouds * sun * (1.0 + 0.15 * normal(rng))) : 0.0;
    temp[t] = 11.0 + 6.0 * std::sin(2.0 * std::numbers::pi * (h - 9.0) / 24.0) + 0.8 * normal(rng);
    const bool weekend = day % 7 >= 5;
    const double kw = (weekend ? 0.6 : 1.0) * load_scale *
                      (12.0 + 14.0 * bump(h, 8.0, 1.5) + 10.0 * bump(h, 13.0, 3.0) + 22.0 * bump(h, 18.0, 1.5));
    load[t] = std::max(1.0, kw + 1.5 * normal(rng)) * dt;
    carbon[t] = std::max(40.0, 180.0 + 90.0 * bump(h, 18.0, 2.5) - 60.0 * sun + 10.0 * normal(rng));
  }
  EmsSite s;
  s.irradiance = ts::TimeSeries(start, resolution, irr, "W/m2");
  s.ambient_temp = ts::TimeSeries(start, resolution, temp, "degC");
  s.load = ts::TimeSeries(start, resolution, load, "kWh");
  s.carbon = ts::TimeSeries(start, resolution, carbon, "g/kWh");
  s.pv = {30.0 + 20.0 * unit(rng), 0.004, 25.0, 0.85, 1000.0};
  s.battery.capacity = 100.0;
  s.battery.soc_min = 10.0;
  s.battery.soc_max = 95.0;
  s.battery.p_max = 25.0;
  s.battery.eta_c = 0.95;
  s.battery.eta_d = 0.95;
  s.battery.initial_soc = 30.0 + 40.0 * unit(rng);
  s.base_price = 0.12 + 0.06 * unit(rng);
  s.peak_multiplier = 1.5 + 1.5 * unit(rng);
  s.export_price = 0.03 + 0.03 * unit(rng);
  return s;
}

}  // namespace energyopt::synthetic
