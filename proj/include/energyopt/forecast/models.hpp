#pragma once

#include <memory>
#include <string>
#include <vector>

#include "energyopt/timeseries/time_series.hpp"

namespace energyopt::forecast {

using ts::TimeSeries;

/// A base learner. predict() returns exactly `horizon` values starting at
/// the end of the fitted history, at the history's resolution.
class ForecastModel {
 public:
  virtual ~ForecastModel() = default;

  virtual std::string name() const = 0;
  /// Exogenous series, when used, start with the history and must extend at
  /// least `horizon` steps past it for predict() to succeed.
  virtual void fit(const TimeSeries& history, const std::vector<TimeSeries>& exogenous = {}) = 0;
  virtual TimeSeries predict(std::size_t horizon) const = 0;
  /// An unfitted model with the same configuration.
  virtual std::unique_ptr<ForecastModel> clone() const = 0;
};

using ModelPool = std::vector<std::unique_ptr<ForecastModel>>;

/// Exponential moving average: l_t = alpha*y_t + (1-alpha)*l_{t-1}, with the
/// level initialised to the first observation. Missing values are skipped.
class EmaModel final : public ForecastModel {
 public:
  explicit EmaModel(double alpha);
  std::string name() const override { return "ema"; }
  void fit(const TimeSeries& history, const std::vector<TimeSeries>& exogenous = {}) override;
  TimeSeries predict(std::size_t horizon) const override;
  std::unique_ptr<ForecastModel> clone() const override { return std::make_unique<EmaModel>(alpha_); }
  double level() const { return level_; }

 private:
  double alpha_;
  double level_ = 0.0;
  TimeSeries history_shape_;
  bool fitted_ = false;
};

/// Repeats the last full season: yhat_{t+h} = y_{t+h-season}.
class SeasonalNaiveModel final : public ForecastModel {
 public:
  explicit SeasonalNaiveModel(std::size_t season_length);
  std::string name() const override { return "seasonal_naive"; }
  void fit(const TimeSeries& history, const std::vector<TimeSeries>& exogenous = {}) override;
  TimeSeries predict(std::size_t horizon) const override;
  std::unique_ptr<ForecastModel> clone() const override {
    return std::make_unique<SeasonalNaiveModel>(season_);
  }

 private:
  std::size_t season_;
  TimeSeries history_;
  bool fitted_ = false;
};

/// Least-squares autoregression on `lags` lagged values plus an intercept
/// and optional exogenous regressors; multi-step forecasts are recursive.
class LinearArModel final : public ForecastModel {
 public:
  explicit LinearArModel(std::size_t lags, bool use_exogenous = true);
  std::string name() const override { return "linear_ar"; }
  void fit(const TimeSeries& history, const std::vector<TimeSeries>& exogenous = {}) override;
  TimeSeries predict(std::size_t horizon) const override;
  std::unique_ptr<ForecastModel> clone() const override {
    return std::make_unique<LinearArModel>(lags_, use_exogenous_);
  }

  // Column order: intercept, lag1..lagN, exogenous in given order.
  const std::vector<std::string>& column_names() const { return columns_; }
  const std::vector<double>& coefficients() const { return coef_; }
  const std::vector<double>& standard_errors() const { return stderr_; }

 private:
  std::size_t lags_;
  bool use_exogenous_;
  std::vector<std::string> columns_;
  std::vector<double> coef_;
  std::vector<double> stderr_;
  TimeSeries history_;
  std::vector<TimeSeries> exogenous_;
  bool fitted_ = false;
};

TimeSeries ema_forecast(const TimeSeries& history, double alpha, std::size_t horizon);
TimeSeries seasonal_naive_forecast(const TimeSeries& history, std::size_t season_length, std::size_t horizon);
TimeSeries linear_ar_forecast(const TimeSeries& history, std::size_t lags, const std::vector<TimeSeries>& exogenous,
                              std::size_t horizon);

}  // namespace energyopt::forecast
