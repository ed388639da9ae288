#include "energyopt/forecast/ensemble.hpp"

#include <cmath>
#include <numeric>

#include "energyopt/error.hpp"

namespace energyopt::forecast {

EnsembleWeights EnsembleWeights::uniform(std::size_t members) {
  if (members == 0) throw ValidationError("ensemble needs at least one member");
  return {std::vector<double>(members, 1.0 / static_cast<double>(members))};
}

void EnsembleWeights::validate() const {
  if (w.empty()) throw ValidationError("ensemble weights are empty");
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw ValidationError("ensemble weights must be non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw ValidationError("ensemble weights must sum to one");
}

EnsembleWeights update_weights(std::span<const double> recent_errors, double epsilon) {
  if (recent_errors.empty()) throw ValidationError("update_weights: empty model set");
  if (!(epsilon > 0.0)) throw ValidationError("update_weights: epsilon must be positive");
  EnsembleWeights out;
  out.w.reserve(recent_errors.size());
  double total = 0.0;
  for (double e : recent_errors) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw ValidationError("update_weights: errors must be finite and >= 0");
    out.w.push_back(1.0 / (e + epsilon));
    total += out.w.back();
  }
  for (double& v : out.w) v /= total;
  return out;
}

TimeSeries ensemble_forecast(const std::vector<TimeSeries>& member_forecasts, const EnsembleWeights& weights) {
  weights.validate();
  if (member_forecasts.size() != weights.w.size()) {
    throw ValidationError("ensemble: " + std::to_string(member_forecasts.size()) + " forecasts for " +
                          std::to_string(weights.w.size()) + " weights");
  }
  const auto& first = member_forecasts.front();
  for (const auto& f : member_forecasts) {
    if (!f.aligned_with(first)) throw ValidationError("ensemble: member forecasts have different horizons");
  }
  std::vector<double> out(first.size(), 0.0);
  for (std::size_t m = 0; m < member_forecasts.size(); ++m) {
    if (weights.w[m] == 0.0) continue;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += weights.w[m] * member_forecasts[m][k];
  }
  return TimeSeries(first.start, first.resolution, std::move(out), first.unit);
}

TimeSeries ensemble_forecast(const ModelPool& fitted_models, const EnsembleWeights& weights, std::size_t horizon) {
  std::vector<TimeSeries> forecasts;
  forecasts.reserve(fitted_models.size());
  for (const auto& m : fitted_models) forecasts.push_back(m->predict(horizon));
  return ensemble_forecast(forecasts, weights);
}

namespace {

double trailing_mae(const TimeSeries& predictions, const TimeSeries& actual, std::size_t origin, std::size_t window) {
  double sum = 0.0;
  std::size_t n = 0;
  const std::size_t from = origin > window ? origin - window : 0;
  for (std::size_t t = from; t < origin; ++t) {
    if (ts::is_missing(predictions[t]) || ts::is_missing(actual[t])) continue;
    sum += std::abs(predictions[t] - actual[t]);
    ++n;
  }
  return n > 0 ? sum / static_cast<double>(n) : ts::kMissing;
}

}  // namespace

BacktestResult backtest(const ModelPool& prototypes, const TimeSeries& history,
                        const std::vector<TimeSeries>& exogenous, const BacktestOptions& opts) {
  if (prototypes.empty()) throw ValidationError("backtest: empty model pool");
  if (opts.horizon == 0) throw ValidationError("backtest: horizon must be positive");
  if (opts.window == 0 || opts.window > history.size()) {
    throw ValidationError("backtest: window of " + std::to_string(opts.window) + " steps exceeds history of " +
                          std::to_string(history.size()));
  }
  const std::size_t min_train = opts.min_train > 0 ? opts.min_train : opts.window;
  if (min_train >= history.size()) throw ValidationError("backtest: history too short for one fold");

  const std::size_t members = prototypes.size();
  const std::size_t n = history.size();
  BacktestResult r;
  const TimeSeries blank(history.start, history.resolution, std::vector<double>(n, ts::kMissing), history.unit);
  r.ensemble_predictions = blank;
  r.member_predictions.assign(members, blank);
  for (const auto& p : prototypes) r.member_names.push_back(p->name());

  for (std::size_t origin = min_train; origin < n; origin += opts.horizon) {
    const std::size_t h = std::min(opts.horizon, n - origin);
    const TimeSeries train = history.slice(0, origin);

    EnsembleWeights weights;
    std::vector<double> errors(members);
    bool have_errors = true;
    for (std::size_t m = 0; m < members; ++m) {
      errors[m] = trailing_mae(r.member_predictions[m], history, origin, opts.window);
      if (ts::is_missing(errors[m])) have_errors = false;
    }
    weights = have_errors ? update_weights(errors, opts.epsilon) : EnsembleWeights::uniform(members);

    std::vector<TimeSeries> forecasts;
    for (std::size_t m = 0; m < members; ++m) {
      auto model = prototypes[m]->clone();
      model->fit(train, exogenous);
      forecasts.push_back(model->predict(h));
      for (std::size_t k = 0; k < h; ++k) r.member_predictions[m][origin + k] = forecasts.back()[k];
    }
    const auto combined = ensemble_forecast(forecasts, weights);
    for (std::size_t k = 0; k < h; ++k) r.ensemble_predictions[origin + k] = combined[k];
    r.trajectory.push_back({history.time_at(origin), std::move(weights)});
  }

  const auto tail = [&](const TimeSeries& s) { return s.slice(min_train, n); };
  const auto actual = tail(history);
  r.ensemble = ts::score(actual, tail(r.ensemble_predictions));
  for (const auto& p : r.member_predictions) r.members.push_back(ts::score(actual, tail(p)));
  return r;
}

nlohmann::json to_json(const BacktestResult& r) {
  nlohmann::json j;
  j["ensemble"] = ts::to_json(r.ensemble);
  nlohmann::json members = nlohmann::json::object();
  for (std::size_t m = 0; m < r.member_names.size(); ++m) members[r.member_names[m]] = ts::to_json(r.members[m]);
  j["members"] = members;
  nlohmann::json traj = nlohmann::json::array();
  for (const auto& f : r.trajectory) {
    nlohmann::json w = nlohmann::json::object();
    for (std::size_t m = 0; m < r.member_names.size(); ++m) w[r.member_names[m]] = f.weights.w[m];
    traj.push_back({{"origin", ts::format_iso8601(f.origin)}, {"weights", w}});
  }
  j["weight_trajectory"] = traj;
  return j;
}

}  // namespace energyopt::forecast
