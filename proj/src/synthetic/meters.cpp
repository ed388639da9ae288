#include <cmath>
#include <numbers>
#include <random>

#include "energyopt/synthetic.hpp"

namespace energyopt::synthetic {

MeterPortfolio meter_portfolio(std::uint64_t seed, std::size_t meters, std::size_t days) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const ts::Duration res{1800};
  const std::size_t per_day = 48;
  const std::size_t n = days * per_day;
  const auto start = ts::parse_iso8601("2022-01-03T00:00:00Z");

  std::vector<double> temp(n);
  double drift = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double h = static_cast<double>(t % per_day) / 2.0;
    drift = 0.97 * drift + 0.4 * normal(rng);
    temp[t] = 6.0 + 4.0 * std::sin(2.0 * std::numbers::pi * (h - 9.0) / 24.0) + drift;
  }

  MeterPortfolio out;
  out.temperature = ts::TimeSeries(start, res, temp, "degC");
  for (std::size_t m = 0; m < meters; ++m) {
    const bool office = m % 3 != 2;
    const double scale = 5.0 + 20.0 * unit(rng);
    const double heating = 0.02 + 0.04 * unit(rng);
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t day = t / per_day;
      const double h = static_cast<double>(t % per_day) / 2.0;
      const bool weekend = day % 7 >= 5;
      double shape;
      if (office) {
        shape = weekend ? 0.3 : (h >= 7.0 && h < 19.0 ? 1.0 : 0.35);
      } else {
        shape = 0.4 + 0.35 * std::exp(-0.5 * std::pow((h - 8.0) / 1.5, 2)) +
                0.6 * std::exp(-0.5 * std::pow((h - 19.0) / 2.0, 2));
      }
      const double kw = scale * shape * (1.0 + heating * std::max(0.0, 15.0 - temp[t])) * (1.0 + 0.05 * normal(rng));
      v[t] = std::max(0.0, kw) * 0.5;  // kWh per half hour
    }
    // Short gaps and the odd spike for the cleaning stage to find.
    const std::size_t gaps = 1 + static_cast<std::size_t>(3 * unit(rng));
    for (std::size_t g = 0; g < gaps; ++g) {
      const auto at = static_cast<std::size_t>(unit(rng) * static_cast<double>(n - 10)) + 5;
      const auto len = 1 + static_cast<std::size_t>(3 * unit(rng));
      for (std::size_t k = at; k < std::min(n - 1, at + len); ++k) v[k] = ts::kMissing;
    }
    if (m % 4 == 1) {
      const auto at = static_cast<std::size_t>(unit(rng) * static_cast<double>(n - 2)) + 1;
      if (!ts::is_missing(v[at])) v[at] *= 8.0;
    }
    // One meter drops out for the last half of the period.
    if (m + 1 == meters) {
      for (std::size_t k = n / 2; k < n; ++k) v[k] = ts::kMissing;
    }
    char id[32];
    std::snprintf(id, sizeof id, "M%03zu", m + 1);
    ts::MeterRecord rec{id, ts::TimeSeries(start, res, std::move(v), "kWh"), {}};
    const std::size_t contract = m / 2;
    const std::size_t sector = contract / 2;
    rec.labels["contract"] = "C" + std::to_string(contract + 1);
    rec.labels["sector"] = std::string(sector % 2 == 0 ? "commercial" : "public") + "-" + std::to_string(sector / 2 + 1);
    rec.labels["district"] = sector % 3 == 2 ? "north" : "south";
    out.meters.push_back(std::move(rec));
  }
  return out;
}

}  // namespace energyopt::synthetic
