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

ChpSite chp_site(std::uint64_t seed, std::size_t days, ts::Duration resolution, bool with_store) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const auto per_day = static_cast<std::size_t>(86400 / resolution.count());
  const std::size_t n = days * per_day;
  const auto start = ts::parse_iso8601("2022-01-10T00:00:00Z");
  const double gas = 0.03 + 0.02 * unit(rng);
  const double cold = 0.8 + 0.4 * unit(rng);
  std::vector<double> ed(n), qd(n), pg(n), pi(n), pe(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double h = 24.0 * static_cast<double>(t % per_day) / static_cast<double>(per_day);
    ed[t] = std::max(20.0, 120.0 + 80.0 * bump(h, 12.0, 4.0) + 60.0 * bump(h, 18.5, 1.5) + 8.0 * normal(rng));
    qd[t] = std::max(150.0, cold * (220.0 + 180.0 * bump(h, 7.5, 1.5) + 140.0 * bump(h, 19.0, 2.0)) +
                                10.0 * normal(rng));
    pg[t] = gas;
    const bool peak = h >= 16.0 && h < 19.0;
    const bool night = h < 7.0;
    pi[t] = night ? 0.11 : (peak ? 0.32 : 0.19);
    pe[t] = night ? 0.04 : (peak ? 0.20 : 0.09);
  }
  ChpSite s;
  s.scenario.e_demand = ts::TimeSeries(start, resolution, ed, "kW");
  s.scenario.q_demand = ts::TimeSeries(start, resolution, qd, "kW");
  s.scenario.p_gas = ts::TimeSeries(start, resolution, pg, "GBP/kWh");
  s.scenario.p_import = ts::TimeSeries(start, resolution, pi, "GBP/kWh");
  s.scenario.p_export = ts::TimeSeries(start, resolution, pe, "GBP/kWh");
  s.scenario.max_restarts_per_day = 2;
  s.scenario.artificial = {0.002, 0.0, 0.001, 5.0};
  s.assets.chp = {200.0, 250.0, 2.6, 0.5, 4.0};
  s.assets.boiler = {700.0, 0.88};
  if (with_store) s.assets.store = chp::ThermalStoreSpec{600.0, 50.0, 200.0, 200.0, 200.0};
  s.rule = {7.0, 24.0, 1.0};
  return s;
}

}  // namespace energyopt::synthetic
