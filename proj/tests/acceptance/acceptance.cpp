// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "energyopt/building/mpc.hpp"
#include "energyopt/chp/network.hpp"
#include "energyopt/cli/app.hpp"
#include "energyopt/ems/dispatch.hpp"
#include "energyopt/error.hpp"
#include "energyopt/forecast/ensemble.hpp"
#include "energyopt/forecast/hierarchy.hpp"
#include "energyopt/milp/solver.hpp"
#include "energyopt/synthetic.hpp"
#include "energyopt/timeseries/metrics.hpp"
#include "support/chp_oracle.hpp"
#include "support/dense_lp.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace energyopt;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("%s  C%d  %s: %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, const char* f = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// 1. Random MILPs against binary enumeration with a dense tableau LP.
void milp_oracle() {
  std::mt19937_64 rng(20240601);
  int matched = 0, infeasible = 0;
  double worst = 0.0, solve_time = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto p = oracle::random_milp(rng, 10, 8, 12);
    const auto expect = oracle::brute_force_milp(p);
    const auto t0 = Clock::now();
    const auto s = milp::solve_milp(p);
    solve_time += seconds_since(t0);
    if (!expect) {
      if (s.status == milp::SolveStatus::infeasible) ++matched, ++infeasible;
      continue;
    }
    if (s.status != milp::SolveStatus::optimal) continue;
    const double diff = std::abs(s.objective - *expect);
    worst = std::max(worst, diff);
    if (diff <= 1e-6) ++matched;
  }
  report(1, matched == 200 && solve_time < 60.0, "MILP oracle suite",
         std::to_string(matched) + "/200 match (" + std::to_string(infeasible) + " infeasible), max |diff| " +
             num(worst) + " <= 1e-6, solve time " + num(solve_time, "%.2f") + " s < 60 s");
}

// 2. RC parameter recovery from noisy synthetic history.
void rc_recovery() {
  const building::RcModelParams truth{2.0, 1.5, 0.1, 1};
  std::vector<double> er, ec, ep;
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto fit = building::fit_parameters(synthetic::rc_history(truth, seed, 14 * 48, 0.05));
    er.push_back(std::abs(fit.params.R / truth.R - 1.0));
    ec.push_back(std::abs(fit.params.C / truth.C - 1.0));
    ep.push_back(std::abs(fit.params.p / truth.p - 1.0));
  }
  const double t = seconds_since(t0);
  const double mr = median(er), mc = median(ec), mp = median(ep);
  report(2, mr <= 0.05 && mc <= 0.05 && mp <= 0.05 && t < 30.0, "RC recovery (10 seeds, 2 weeks, sigma 0.05)",
         "median rel. error R " + num(100 * mr, "%.3f") + "%, C " + num(100 * mc, "%.3f") + "%, p " +
             num(100 * mp, "%.3f") + "% (limit 5%), " + num(t, "%.2f") + " s < 30 s");
}

bool dominates(const building::ParetoPoint& a, const building::ParetoPoint& b) {
  return a.cost <= b.cost && a.carbon <= b.carbon && a.comfort >= b.comfort &&
         (a.cost < b.cost || a.carbon < b.carbon || a.comfort > b.comfort);
}

// 3. MPC against the thermostat on the bundled winter week, and the Pareto audit.
void mpc_dominance() {
  const auto b = synthetic::winter_building(1, 7);
  const auto n = b.inputs.size();
  const auto base = building::simulate(b.params, building::thermostat_policy(b.hvac, b.comfort, b.thermostat), b.hvac,
                                       b.comfort, b.inputs, b.t_int0, n);
  const auto grid = building::default_weight_grid();
  double best_saving = -1e300;
  int dominating = 0;
  for (const auto& w : grid) {
    const auto s = building::optimise_horizon(b.params, b.hvac, b.comfort, w, b.inputs, b.t_int0);
    if (s.cost <= base.cost && s.comfort_criterion >= base.comfort_criterion) {
      ++dominating;
      best_saving = std::max(best_saving, (base.cost - s.cost) / base.cost);
    }
  }
  const auto sweep = building::pareto_sweep(grid, b.params, b.hvac, b.comfort, b.inputs, b.t_int0);
  std::vector<bool> on(sweep.points.size(), false);
  for (auto i : sweep.front) on[i] = true;
  bool audit = !sweep.front.empty();
  for (std::size_t i = 0; i < sweep.points.size(); ++i) {
    bool dominated = false, duplicate = false;
    for (std::size_t j = 0; j < sweep.points.size(); ++j) {
      dominated = dominated || dominates(sweep.points[j], sweep.points[i]);
      const auto& p = sweep.points[j];
      duplicate = duplicate || (j < i && on[j] && p.cost == sweep.points[i].cost &&
                                p.carbon == sweep.points[i].carbon && p.comfort == sweep.points[i].comfort);
    }
    audit = audit && (on[i] ? !dominated : (dominated || duplicate));
  }
  report(3, dominating > 0 && best_saving > 0.0 && audit, "MPC dominance and Pareto audit",
         std::to_string(dominating) + "/" + std::to_string(grid.size()) +
             " weight triples beat the thermostat (cost " + num(base.cost, "%.2f") + ", comfort " +
             num(base.comfort_criterion, "%.3f") + "), best saving " + num(100 * best_saving, "%.2f") +
             "% > 0; front of " + std::to_string(sweep.front.size()) + "/" + std::to_string(sweep.points.size()) +
             " points " + (audit ? "non-dominated" : "FAILS audit"));
}

// 4. CHP: 4-step enumeration oracle, then storage scenarios against the baseline.
void chp_oracle() {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int trials = 0, matched = 0;
  double worst = 0.0;
  const auto start = ts::parse_iso8601("2022-01-10T22:00:00Z");
  for (int k = 0; k < 100; ++k) {
    chp::NetworkScenario sc;
    std::vector<double> ed(4), qd(4), gas(4), imp(4), exp(4);
    for (std::size_t t = 0; t < 4; ++t) {
      ed[t] = 100.0 * u(rng);
      qd[t] = 150.0 * u(rng);
      gas[t] = 0.01 + 0.06 * u(rng);
      imp[t] = 0.05 + 0.3 * u(rng);
      exp[t] = 0.4 * u(rng);
    }
    const ts::Duration hour{3600};
    sc.e_demand = {start, hour, ed};
    sc.q_demand = {start, hour, qd};
    sc.p_gas = {start, hour, gas};
    sc.p_import = {start, hour, imp};
    sc.p_export = {start, hour, exp};
    sc.max_restarts_per_day = static_cast<int>(3 * u(rng));
    sc.initial_on = u(rng) < 0.3;
    sc.artificial = {0.01 * u(rng), 0.01 * u(rng), 0.01 * u(rng), 5.0 * u(rng)};
    chp::Assets a;
    a.chp = {40.0 + 40.0 * u(rng), 50.0 + 50.0 * u(rng), 2.0 + u(rng), 0.6 * u(rng), 3.0 * u(rng)};
    a.boiler = {(u(rng) < 0.2 ? 60.0 : 160.0), 0.75 + 0.2 * u(rng)};
    const auto expect = oracle::chp_enumeration(sc, a);
    ++trials;
    try {
      const auto s = chp::optimise(sc, a);
      if (expect) {
        const double diff = std::abs(s.costs.total() - *expect);
        worst = std::max(worst, diff);
        if (diff <= 1e-6) ++matched;
      }
    } catch (const InfeasibleError&) {
      if (!expect) ++matched;
    }
  }

  int storage_ok = 0;
  double soe_residual = 0.0, min_saving = 1e300;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto site = synthetic::chp_site(seed, 2);
    const auto& sc = site.scenario;
    const auto s = chp::optimise(sc, site.assets);
    const auto base = chp::baseline_schedule(sc, site.assets, site.rule);
    const double dt = sc.step_hours();
    double prev = site.assets.store->initial_soe, resid = 0.0;
    for (std::size_t t = 0; t < s.size(); ++t) {
      resid = std::max(resid, std::abs(s.soe[t] - prev - (s.q_charge[t] - s.q_discharge[t]) * dt));
      prev = s.soe[t];
    }
    soe_residual = std::max(soe_residual, resid);
    const double saving = base.costs.total() - s.costs.total();
    min_saving = std::min(min_saving, saving);
    if (resid <= 1e-9 && saving >= -1e-6 * std::abs(base.costs.total())) ++storage_ok;
  }
  report(4, matched == trials && storage_ok == 20, "CHP oracle and storage scenarios",
         std::to_string(matched) + "/" + std::to_string(trials) + " 4-step scenarios match enumeration (max |diff| " +
             num(worst) + " <= 1e-6); storage " + std::to_string(storage_ok) +
             "/20 with SOE residual " + num(soe_residual) + " <= 1e-9 and cost <= baseline (min saving " +
             num(min_saving, "%.2f") + ")");
}

// 5. EMS dominance chain and the constructed arbitrage scenario.
void ems_chain() {
  int ok = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto site = synthetic::ems_site(seed, 2);
    const auto pv = ems::simulate_pv(site.irradiance, site.ambient_temp, site.pv);
    const auto tariffs =
        ems::tariff_scenarios(site.base_price, site.peak_multiplier, site.export_price, site.carbon);
    const auto& tariff = tariffs[seed % tariffs.size()];
    const milp::SolveOptions opts;
    const double base = ems::baseline_dispatch(pv, site.load, site.battery, tariff).cost;
    const double self = ems::optimise_self_consumption(pv, site.load, site.battery, tariff, std::nullopt, opts).cost;
    const double cost = ems::optimise_cost(pv, site.load, site.battery, tariff, std::nullopt, opts).cost;
    const double tol = opts.rel_gap * std::max(1.0, std::abs(base));
    worst = std::max({worst, cost - self, self - base});
    if (cost <= self + tol && self <= base + tol) ++ok;
  }

  // Flat load, no PV, an empty battery with 0.90 round trip and a 3x peak.
  const auto start = ts::parse_iso8601("2022-04-04T00:00:00Z");
  const ts::Duration hour{3600};
  const ts::TimeSeries zero(start, hour, std::vector<double>(24, 0.0), "kWh");
  const ts::TimeSeries load(start, hour, std::vector<double>(24, 10.0), "kWh");
  const ts::TimeSeries carbon(start, hour, std::vector<double>(24, 200.0), "g/kWh");
  ems::BatterySpec bat;
  bat.eta_c = bat.eta_d = std::sqrt(0.9);
  bat.initial_soc = bat.soc_min;
  const auto tariffs = ems::tariff_scenarios(0.10, 3.0, 0.0, carbon);
  const auto& peak = *std::find_if(tariffs.begin(), tariffs.end(), [](const auto& t) { return t.name == "peak_offpeak"; });
  const double self = ems::optimise_self_consumption(zero, load, bat, peak).cost;
  const double cost = ems::optimise_cost(zero, load, bat, peak).cost;
  report(5, ok == 20 && self - cost > 0.0, "EMS dominance chain and arbitrage",
         std::to_string(ok) + "/20 scenarios satisfy cost <= self-consumption <= baseline (worst excess " +
             num(worst) + "); arbitrage saving " + num(self - cost, "%.4f") + " (" +
             num(100 * (self - cost) / self, "%.2f") + "%) > 0");
}

// 6. Battery twin hand values and PV night output.
void twin_exactness() {
  ems::BatterySpec b;
  b.capacity = 100.0;
  b.eta_c = b.eta_d = 0.95;
  const double up = ems::battery_step(50.0, 10.0, 0.0, b, 1.0);
  const double down = ems::battery_step(50.0, 0.0, 10.0, b, 1.0);
  // 50 + 0.95*10 = 59.5; 50 - 10/0.95 = 50 - 1000/95.
  const double up_err = std::abs(up - 59.5), down_err = std::abs(down - (50.0 - 1000.0 / 95.0));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> irr(-50.0, 1100.0), temp(-10.0, 40.0);
  std::bernoulli_distribution dark(0.4);
  const auto start = ts::parse_iso8601("2022-06-01T00:00:00Z");
  std::vector<double> i(5000), t(5000);
  for (std::size_t k = 0; k < i.size(); ++k) {
    i[k] = dark(rng) ? -std::abs(irr(rng)) * (k % 3 == 0 ? 0.0 : 1.0) : irr(rng);
    t[k] = temp(rng);
  }
  ems::PvSpec spec;
  spec.dc_rating = 40.0;
  const auto pv = ems::simulate_pv({start, ts::Duration{1800}, i, "W/m2"}, {start, ts::Duration{1800}, t, "degC"}, spec);
  std::size_t dark_steps = 0, nonzero = 0;
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (i[k] > 0.0) continue;
    ++dark_steps;
    if (pv[k] != 0.0) ++nonzero;
  }
  report(6, up_err <= 1e-9 && down_err <= 1e-9 && nonzero == 0, "battery/PV twin exactness",
         "charge 10 -> " + num(up, "%.12f") + " (|err| " + num(up_err) + "), discharge 10 -> " +
             num(down, "%.12f") + " (|err| " + num(down_err) + ") <= 1e-9; " + std::to_string(nonzero) + " of " +
             std::to_string(dark_steps) + " steps with I <= 0 produce output");
}

// 7. Ensemble weights, regime-switch tracking and bottom-up coherence.
void forecast_properties() {
  const auto start = ts::parse_iso8601("2022-01-03T00:00:00Z");
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> noise(0.0, 1.0);
  // Daily cycle for a week, then a flat regime at a new level.
  const std::size_t n = 48 * 14, switch_at = 48 * 7;
  std::vector<double> v(n);
  for (std::size_t t = 0; t < n; ++t) {
    v[t] = t < switch_at ? 50.0 + 20.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 48.0)
                         : 80.0;
    v[t] += noise(rng);
  }
  const ts::TimeSeries hist(start, ts::Duration{1800}, v, "kWh");
  forecast::ModelPool pool;
  pool.push_back(std::make_unique<forecast::EmaModel>(0.3));
  pool.push_back(std::make_unique<forecast::SeasonalNaiveModel>(48));
  pool.push_back(std::make_unique<forecast::LinearArModel>(2));
  forecast::BacktestOptions opts;
  opts.horizon = 48;
  opts.window = 96;
  const auto r = forecast::backtest(pool, hist, {}, opts);
  double weight_err = 0.0;
  for (const auto& f : r.trajectory) {
    double s = 0.0;
    for (double w : f.weights.w) s += w;
    weight_err = std::max(weight_err, std::abs(s - 1.0));
  }
  const std::size_t from = switch_at + opts.window;
  const auto mae = [&](const ts::TimeSeries& p) { return ts::score(hist.slice(from, n), p.slice(from, n)).mae; };
  const double ens = mae(r.ensemble_predictions);
  double best = 1e300;
  std::string best_name;
  for (std::size_t m = 0; m < pool.size(); ++m) {
    const double e = mae(r.member_predictions[m]);
    if (e < best) best = e, best_name = r.member_names[m];
  }

  const auto portfolio = synthetic::meter_portfolio(1);
  std::map<std::string, ts::TimeSeries> meters;
  for (const auto& m : portfolio.meters) {
    auto s = m.series;
    for (auto& x : s.values) x = ts::is_missing(x) ? 0.0 : x;
    meters[m.meter_id] = s;
  }
  const auto h = forecast::Hierarchy::from_labels(portfolio.meters);
  using forecast::Level;
  const Level levels[] = {Level::meter, Level::contract, Level::sector, Level::district, Level::portfolio};
  std::size_t mismatches = 0, checked = 0;
  for (std::size_t i = 1; i < std::size(levels); ++i) {
    const auto below = forecast::aggregate_bottom_up(meters, h, levels[i - 1]);
    const auto here = forecast::aggregate_bottom_up(meters, h, levels[i]);
    for (const auto& [node, kids] : h.children(levels[i])) {
      for (std::size_t k = 0; k < here.at(node).size(); ++k) {
        double sum = 0.0;
        for (const auto& kid : kids) sum += below.at(kid)[k];
        ++checked;
        if (sum != here.at(node)[k]) ++mismatches;
      }
    }
  }
  // Portfolio total against the plain sum of every meter.
  const auto top = forecast::aggregate_bottom_up(meters, h, Level::portfolio).at(forecast::kPortfolioNode);
  double top_resid = 0.0;
  for (std::size_t k = 0; k < top.size(); ++k) {
    double sum = 0.0;
    for (const auto& [id, s] : meters) sum += s[k];
    top_resid = std::max(top_resid, std::abs(top[k] - sum) / std::max(1.0, std::abs(sum)));
  }
  const bool weights_ok = weight_err <= 1e-12;
  const bool switch_ok = ens <= 1.05 * best;
  const bool coherent = mismatches == 0 && top_resid <= 1e-12;
  const auto verdict = [](bool b) { return b ? "ok" : "FAILS"; };
  report(7, weights_ok && switch_ok && coherent, "forecast properties",
         std::string("weights ") + verdict(weights_ok) + " (max |sum(w) - 1| " + num(weight_err) + " over " +
             std::to_string(r.trajectory.size()) + " folds); regime switch " + verdict(switch_ok) +
             " (post-adaptation MAE ensemble " + num(ens, "%.4f") + " vs best member " + best_name + " " +
             num(best, "%.4f") + ", " + num(100 * (ens / best - 1.0), "%+.1f") + "%, limit +5%); coherence " +
             verdict(coherent) + " (" + std::to_string(mismatches) + " mismatches in " + std::to_string(checked) +
             " parent steps, portfolio rel. residual " + num(top_resid) + ")");
}

// 8. Metric examples.
void metric_examples() {
  const std::vector<double> a1{100.0}, p1{110.0}, a2{0.0, 0.0}, p2{3.0, 4.0};
  const auto r1 = ts::score(a1, p1);
  const auto r2 = ts::score(a2, p2);
  const double mape = 100.0 * r1.mape, rmse = r2.rmse, smape = 100.0 * r1.smape;
  const bool ok = std::abs(mape - 10.0) <= 1e-4 && std::abs(rmse - 3.5355) <= 1e-4 &&
                  std::abs(smape - 9.5238) <= 1e-4 && std::abs(r1.mae - 10.0) <= 1e-4;
  report(8, ok, "metric examples",
         "MAPE " + num(mape, "%.6f") + "% (10), RMSE " + num(rmse, "%.6f") + " (3.5355), sMAPE " +
             num(smape, "%.6f") + "% (9.5238), tolerance 1e-4");
}

// 9. Every CLI command on the bundled dataset: < 5 min and byte-identical twice.
void cli_determinism() {
  const fs::path data = ENERGYOPT_DATA_DIR;
  const fs::path scratch = fs::temp_directory_path() / "energyopt_acceptance";
  fs::remove_all(scratch);
  bool ok = true;
  std::string detail;
  double slowest = 0.0;
  for (const auto& cmd : cli::commands()) {
    std::vector<fs::path> dirs;
    for (const char* run : {"a", "b"}) {
      cli::Options o;
      o.command = cmd;
      o.out_dir = (scratch / (cmd + "_" + run)).string();
      if (cmd == "synth") {
        o.seed = 1;
      } else {
        o.config_path = (data / "config.json").string();
      }
      std::ostringstream log, err;
      const auto t0 = Clock::now();
      const int code = cli::run(o, log, err);
      const double t = seconds_since(t0);
      slowest = std::max(slowest, t);
      if (code != 0 || t >= 300.0) {
        ok = false;
        detail += " " + cmd + " exit " + std::to_string(code) + " " + err.str();
      }
      dirs.push_back(*o.out_dir);
    }
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(dirs[0])) {
      ++files;
      if (slurp(e.path()) != slurp(dirs[1] / e.path().filename())) {
        ok = false;
        detail += " " + cmd + "/" + e.path().filename().string() + " differs";
      }
      // The bundled dataset is exactly what synth produces for seed 1.
      if (cmd == "synth" && e.path().filename() != "manifest.json" &&
          slurp(e.path()) != slurp(data / e.path().filename())) {
        ok = false;
        detail += " data/" + e.path().filename().string() + " is stale";
      }
    }
    detail += " " + cmd + ":" + std::to_string(files);
  }
  fs::remove_all(scratch);
  report(9, ok, "CLI determinism on the bundled dataset",
         "all " + std::to_string(cli::commands().size()) + " commands identical across two runs, slowest " +
             num(slowest, "%.2f") + " s < 300 s; files per command" + detail);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{milp_oracle,         rc_recovery,     mpc_dominance,
                                                    chp_oracle,          ems_chain,       twin_exactness,
                                                    forecast_properties, metric_examples, cli_determinism};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL  criterion threw: %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
