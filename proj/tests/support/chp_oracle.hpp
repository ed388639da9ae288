#pragma once

// Exhaustive on/off enumeration for storage-free CHP scenarios. Without
// storage the steps only couple through the restart cap, and each step's
// cost is convex piecewise linear in the CHP load, so checking the
// breakpoints gives the exact per-step minimum.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

#include "energyopt/chp/network.hpp"

namespace oracle {

inline double chp_step_cost(const energyopt::chp::NetworkScenario& sc, const energyopt::chp::Assets& a,
                            std::size_t t, bool on) {
  const double inf = std::numeric_limits<double>::infinity();
  const double dt = sc.step_hours();
  const auto& art = sc.artificial;
  const double ed = sc.e_demand[t], qd = sc.q_demand[t];
  const auto cost_at = [&](double load) {
    const double e_chp = load * a.chp.elec_capacity;
    const double boiler = qd - load * a.chp.heat_capacity;
    if (boiler < -1e-12 || boiler > a.boiler.heat_capacity + 1e-12) return inf;
    // Export x in [max(0, e_chp - ed), e_chp]; import = ed - e_chp + x.
    const double import_rate = sc.p_import[t] + art.import_pref;
    const double x = (import_rate - sc.p_export[t] < 0.0) ? e_chp : std::max(0.0, e_chp - ed);
    const double import = ed - e_chp + x;
    double c = (e_chp * a.chp.gas_per_elec + std::max(boiler, 0.0) / a.boiler.efficiency) * sc.p_gas[t];
    c += import * import_rate - x * sc.p_export[t];
    c += art.chp_pref * e_chp + art.boiler_pref * std::max(boiler, 0.0);
    if (on) c += a.chp.maintenance_cost_per_hour;
    return c * dt;
  };
  if (!on) return cost_at(0.0);
  const double lo = a.chp.min_load_fraction;
  const double hi = std::min(1.0, qd / a.chp.heat_capacity);
  if (lo > hi + 1e-12) return inf;
  double best = inf;
  for (double l : {lo, hi, ed / a.chp.elec_capacity, (qd - a.boiler.heat_capacity) / a.chp.heat_capacity}) {
    best = std::min(best, cost_at(std::clamp(l, lo, std::max(lo, hi))));
  }
  return best;
}

/// Minimum real + artificial cost over all on/off patterns; nullopt if none is feasible.
inline std::optional<double> chp_enumeration(const energyopt::chp::NetworkScenario& sc,
                                             const energyopt::chp::Assets& a) {
  const std::size_t n = sc.size();
  std::optional<double> best;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double total = 0.0;
    std::map<long long, int> restarts;
    bool prev = sc.initial_on;
    bool ok = true;
    for (std::size_t t = 0; t < n && ok; ++t) {
      const bool on = (mask >> t) & 1U;
      if (on && !prev) {
        total += sc.artificial.restart;
        if (++restarts[energyopt::ts::day_index(sc.e_demand.time_at(t))] > sc.max_restarts_per_day) ok = false;
      }
      prev = on;
      total += chp_step_cost(sc, a, t, on);
      if (!std::isfinite(total)) ok = false;
    }
    if (ok && (!best || total < *best)) best = total;
  }
  return best;
}

}  // namespace oracle
