#pragma once

#include <span>
#include <string>
#include <vector>

#include "energyopt/forecast/models.hpp"
#include "energyopt/timeseries/metrics.hpp"

namespace energyopt::forecast {

/// Non-negative member weights summing to one.
struct EnsembleWeights {
  std::vector<double> w;

  static EnsembleWeights uniform(std::size_t members);
  /// Throws ValidationError unless w >= 0 and |sum - 1| <= 1e-12.
  void validate() const;
};

inline constexpr double kDefaultEpsilon = 1e-6;

/// Inverse-error weighting: w_m = (e_m + eps)^-1 / sum_k (e_k + eps)^-1.
EnsembleWeights update_weights(std::span<const double> recent_errors, double epsilon = kDefaultEpsilon);

/// Pointwise weighted sum of member forecasts.
TimeSeries ensemble_forecast(const std::vector<TimeSeries>& member_forecasts, const EnsembleWeights& weights);

/// Predicts `horizon` steps with each fitted model and combines them.
TimeSeries ensemble_forecast(const ModelPool& fitted_models, const EnsembleWeights& weights, std::size_t horizon);

struct BacktestOptions {
  std::size_t horizon = 48;
  std::size_t window = 7 * 48;  // trailing error window in steps
  std::size_t min_train = 0;    // first fold origin; 0 means `window`
  double epsilon = kDefaultEpsilon;
};

struct FoldWeights {
  ts::TimePoint origin;
  EnsembleWeights weights;
};

struct BacktestResult {
  std::vector<std::string> member_names;
  ts::AccuracyReport ensemble;
  std::vector<ts::AccuracyReport> members;
  // Out-of-sample predictions over the whole history; NaN before the first fold.
  TimeSeries ensemble_predictions;
  std::vector<TimeSeries> member_predictions;
  std::vector<FoldWeights> trajectory;
};

/// Rolling-origin evaluation. At each fold the members are refitted on data
/// before the origin and weighted by their MAE over the trailing `window`
/// steps of earlier out-of-sample predictions (uniform at the first fold).
BacktestResult backtest(const ModelPool& prototypes, const TimeSeries& history,
                        const std::vector<TimeSeries>& exogenous, const BacktestOptions& opts);

nlohmann::json to_json(const BacktestResult& r);

}  // namespace energyopt::forecast
