#include <cmath>
#include <set>

#include "config.hpp"
#include "energyopt/forecast/ensemble.hpp"
#include "energyopt/forecast/hierarchy.hpp"
#include "energyopt/timeseries/cleaning.hpp"
#include "energyopt/timeseries/csv.hpp"

namespace energyopt::cli {

namespace {

using forecast::Level;

constexpr Level kLevels[] = {Level::meter, Level::contract, Level::sector, Level::district, Level::portfolio};

std::map<Level, std::map<std::string, ts::TimeSeries>> all_levels(const std::map<std::string, ts::TimeSeries>& meters,
                                                                   const forecast::Hierarchy& h) {
  std::map<Level, std::map<std::string, ts::TimeSeries>> out;
  for (Level l : kLevels) out[l] = forecast::aggregate_bottom_up(meters, h, l);
  return out;
}

// Largest |parent - sum of children| over every parent node and step.
double coherence_residual(const std::map<Level, std::map<std::string, ts::TimeSeries>>& levels,
                          const forecast::Hierarchy& h) {
  double worst = 0.0;
  for (std::size_t i = 1; i < std::size(kLevels); ++i) {
    const auto& below = levels.at(kLevels[i - 1]);
    for (const auto& [node, kids] : h.children(kLevels[i])) {
      const auto& parent = levels.at(kLevels[i]).at(node);
      for (std::size_t k = 0; k < parent.size(); ++k) {
        double sum = 0.0;
        for (const auto& kid : kids) sum += below.at(kid)[k];
        if (std::isnan(sum) && std::isnan(parent[k])) continue;
        worst = std::max(worst, std::abs(parent[k] - sum));
      }
    }
  }
  return worst;
}

std::vector<std::pair<std::string, ts::TimeSeries>> level_columns(
    const std::map<Level, std::map<std::string, ts::TimeSeries>>& levels) {
  std::vector<std::pair<std::string, ts::TimeSeries>> cols;
  for (Level l : kLevels) {
    for (const auto& [node, s] : levels.at(l)) cols.emplace_back(forecast::to_string(l) + "/" + node, s);
  }
  return cols;
}

}  // namespace

void run_forecast(Context& ctx) {
  auto& sec = ctx.root().child("forecast");
  auto meter_input = ctx.series(sec, "meters");
  const std::string meters_file = ctx.inputs().back().name;
  std::vector<ts::MeterRecord> records;
  for (auto& [id, s] : meter_input) records.push_back({id, s, {}});
  ts::attach_labels(records, ctx.input(sec, "labels").path.string());
  const auto weather = ctx.series(sec, "weather");
  const std::string weather_file = ctx.inputs().back().name;
  const auto temperature = require_column(weather, sec.text("temperature_column", "temperature"), weather_file, "degC");

  auto& clean = sec.child("cleaning");
  const double min_completeness = clean.number("min_completeness", 0.9);
  const std::size_t max_gap = clean.count("max_gap", 4);
  ts::AnomalyOptions anomaly;
  anomaly.z_threshold = clean.number("anomaly_z", anomaly.z_threshold);
  anomaly.half_window = clean.count("anomaly_half_window", anomaly.half_window);

  auto& models = sec.child("models");
  const double alpha = models.number("ema_alpha", 0.3);
  const std::size_t season = models.count("season_length", 336);
  const std::size_t lags = models.count("ar_lags", 4);
  const bool exogenous = models.boolean("exogenous", true);

  auto& bt = sec.child("backtest");
  forecast::BacktestOptions bopts;
  bopts.horizon = bt.count("horizon", 48);
  bopts.window = bt.count("window", 336);
  bopts.min_train = bt.count("min_train", 0);
  bopts.epsilon = bt.number("epsilon", forecast::kDefaultEpsilon);

  if (records.empty()) throw ConfigError(meters_file + " has no meter columns");
  const auto& grid = records.front().series;
  if (temperature.start != grid.start || temperature.resolution != grid.resolution ||
      temperature.size() < grid.size() + bopts.horizon) {
    throw ConfigError("weather must start with the meters, share their resolution and extend " +
                      std::to_string(bopts.horizon) + " steps beyond them");
  }

  // Cleaning: completeness filter, anomalies blanked, short gaps interpolated.
  auto part = ts::filter_meters(records, min_completeness, grid.start, grid.end());
  json cleaning = {{"min_completeness", min_completeness}, {"max_gap", max_gap}};
  json rejected = json::array();
  for (const auto& r : part.rejected) rejected.push_back({{"meter", r.meter_id}, {"reason", "completeness"}});
  json kept_report = json::object();
  std::vector<ts::MeterRecord> kept;
  for (auto& r : part.kept) {
    const auto flagged = ts::detect_anomalies(r.series, anomaly);
    const auto missing = r.series.count_missing();
    for (auto k : flagged) r.series[k] = ts::kMissing;
    auto filled = ts::fill_gaps(r.series, max_gap);
    if (!filled.unfilled.empty()) {
      rejected.push_back({{"meter", r.meter_id}, {"reason", "unfilled gap"}});
      continue;
    }
    json flagged_at = json::array();
    for (auto k : flagged) flagged_at.push_back(ts::format_iso8601(r.series.time_at(k)));
    kept_report[r.meter_id] = {{"missing", missing}, {"anomalies", flagged_at}};
    r.series = std::move(filled.series);
    kept.push_back(std::move(r));
  }
  if (kept.empty()) throw ConfigError("no meter survives cleaning");
  cleaning["kept"] = kept_report;
  cleaning["rejected"] = rejected;
  ctx.note("cleaning kept " + std::to_string(kept.size()) + " of " + std::to_string(records.size()) + " meters");

  const auto hierarchy = forecast::Hierarchy::from_labels(kept);
  forecast::ModelPool pool;
  pool.push_back(std::make_unique<forecast::EmaModel>(alpha));
  pool.push_back(std::make_unique<forecast::SeasonalNaiveModel>(season));
  pool.push_back(std::make_unique<forecast::LinearArModel>(lags, exogenous));

  const std::size_t n = grid.size();
  const std::vector<ts::TimeSeries> exog{temperature};
  std::map<std::string, ts::TimeSeries> actual, predicted, future;
  json meter_reports = json::object();
  for (const auto& r : kept) {
    ctx.note("backtest " + r.meter_id);
    const auto result = forecast::backtest(pool, r.series, exog, bopts);
    meter_reports[r.meter_id] = forecast::to_json(result);
    actual[r.meter_id] = r.series;
    predicted[r.meter_id] = result.ensemble_predictions;

    // Forward forecast weighted by each member's error over the last window.
    std::vector<double> errors;
    for (const auto& p : result.member_predictions) {
      double sum = 0.0;
      std::size_t count = 0;
      for (std::size_t t = n - std::min(n, bopts.window); t < n; ++t) {
        if (ts::is_missing(p[t])) continue;
        sum += std::abs(p[t] - r.series[t]);
        ++count;
      }
      errors.push_back(count > 0 ? sum / static_cast<double>(count) : 0.0);
    }
    const auto weights = forecast::update_weights(errors, bopts.epsilon);
    forecast::ModelPool fitted;
    for (const auto& proto : pool) {
      fitted.push_back(proto->clone());
      fitted.back()->fit(r.series, exog);
    }
    future[r.meter_id] = forecast::ensemble_forecast(fitted, weights, bopts.horizon);
    json w = json::object();
    for (std::size_t m = 0; m < pool.size(); ++m) w[pool[m]->name()] = weights.w[m];
    meter_reports[r.meter_id]["forecast_weights"] = w;
  }

  const auto actual_levels = all_levels(actual, hierarchy);
  const auto predicted_levels = all_levels(predicted, hierarchy);
  const auto future_levels = all_levels(future, hierarchy);

  const std::size_t first = bopts.min_train > 0 ? bopts.min_train : bopts.window;
  json accuracy = json::object();
  for (Level l : kLevels) {
    json nodes = json::object();
    for (const auto& [node, s] : actual_levels.at(l)) {
      nodes[node] = ts::to_json(ts::score(s.slice(first, n), predicted_levels.at(l).at(node).slice(first, n)));
    }
    accuracy[forecast::to_string(l)] = nodes;
  }
  const double residual =
      std::max(coherence_residual(predicted_levels, hierarchy), coherence_residual(future_levels, hierarchy));

  json report = {
      {"cleaning", cleaning},
      {"backtest", {{"horizon", bopts.horizon}, {"window", bopts.window}, {"first_origin", ts::format_iso8601(grid.time_at(first))}}},
      {"meters", meter_reports},
      {"accuracy_by_level", accuracy},
      {"coherence_max_residual", residual},
      {"forecast", {{"start", ts::format_iso8601(grid.end())}, {"steps", bopts.horizon}}},
  };
  ctx.out.add_json("forecast_report.json", report);

  std::vector<std::pair<std::string, ts::TimeSeries>> backtest_cols;
  for (Level l : kLevels) {
    for (const auto& [node, s] : actual_levels.at(l)) {
      const auto name = forecast::to_string(l) + "/" + node;
      backtest_cols.emplace_back(name, s);
      backtest_cols.emplace_back(name + "/forecast", predicted_levels.at(l).at(node));
    }
  }
  ctx.out.add("forecast_backtest.csv", ts::to_csv(backtest_cols));
  ctx.out.add("forecast.csv", ts::to_csv(level_columns(future_levels)));
}

}  // namespace energyopt::cli
