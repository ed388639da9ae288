#pragma once

// Dynamic programme over a grid of stored-energy levels. Moving between
// levels fixes the battery flow (charge = delta / eta_c, discharge =
// -delta * eta_d) and the grid takes the remainder, so when the optimal
// levels sit on the grid the result is exact.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "energyopt/ems/dispatch.hpp"

namespace oracle {

struct DispatchCase {
  std::vector<double> pv, load, price;
  double export_price = 0.0;
  double dt = 1.0;
  bool self_consumption = false;
  std::optional<double> peak;
};

struct DispatchOptimum {
  double cost;
  std::vector<double> discharge;
};

inline std::optional<DispatchOptimum> dispatch_dp(const DispatchCase& c, const energyopt::ems::BatterySpec& b,
                                                  double level_kwh) {
  const double inf = std::numeric_limits<double>::infinity();
  const double lo = b.soc_min * b.capacity / 100.0, hi = b.soc_max * b.capacity / 100.0;
  const auto levels = static_cast<std::size_t>(std::llround((hi - lo) / level_kwh)) + 1;
  const auto level_of = [&](double e) { return static_cast<std::size_t>(std::llround((e - lo) / level_kwh)); };
  const std::size_t n = c.load.size();
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(levels, inf));
  std::vector<std::vector<std::size_t>> from(n + 1, std::vector<std::size_t>(levels, 0));
  best[0][level_of(b.initial_soc * b.capacity / 100.0)] = 0.0;
  const double cap = b.p_max * c.dt;
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t i = 0; i < levels; ++i) {
      if (!std::isfinite(best[t][i])) continue;
      for (std::size_t j = 0; j < levels; ++j) {
        const double delta = (static_cast<double>(j) - static_cast<double>(i)) * level_kwh;
        const double charge = delta > 0 ? delta / b.eta_c : 0.0;
        const double discharge = delta < 0 ? -delta * b.eta_d : 0.0;
        if (charge > cap + 1e-9 || discharge > cap + 1e-9) continue;
        if (c.self_consumption && (charge > std::max(c.pv[t] - c.load[t], 0.0) + 1e-9 ||
                                   discharge > std::max(c.load[t] - c.pv[t], 0.0) + 1e-9)) {
          continue;
        }
        const double net = c.load[t] - c.pv[t] + charge - discharge;
        if (c.peak && net > *c.peak + 1e-9) continue;
        const double step = net > 0 ? c.price[t] * net : c.export_price * net;
        if (best[t][i] + step < best[t + 1][j]) {
          best[t + 1][j] = best[t][i] + step;
          from[t + 1][j] = i;
        }
      }
    }
  }
  const auto it = std::min_element(best[n].begin(), best[n].end());
  if (!std::isfinite(*it)) return std::nullopt;
  DispatchOptimum out{*it, std::vector<double>(n, 0.0)};
  std::size_t j = static_cast<std::size_t>(it - best[n].begin());
  for (std::size_t t = n; t-- > 0;) {
    const std::size_t i = from[t + 1][j];
    if (j < i) out.discharge[t] = (static_cast<double>(i) - static_cast<double>(j)) * level_kwh * b.eta_d;
    j = i;
  }
  return out;
}

}  // namespace oracle
