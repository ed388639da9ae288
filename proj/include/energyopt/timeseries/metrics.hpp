#pragma once

#include <cstddef>
#include <span>

#include "json.hpp"

#include "energyopt/timeseries/time_series.hpp"

namespace energyopt::ts {

/// Accuracy of a prediction against actuals. mape and smape are fractions
/// (0.1 == 10%). Undefined entries (r2 with constant actuals, mape with all
/// actuals zero, nmae with zero mean |actual|) are NaN and serialise as null.
struct AccuracyReport {
  double mae = 0.0;
  double mape = 0.0;
  double rmse = 0.0;
  double nmae = 0.0;
  double smape = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

/// Steps where either side is missing are skipped.
AccuracyReport score(std::span<const double> actual, std::span<const double> predicted);
AccuracyReport score(const TimeSeries& actual, const TimeSeries& predicted);

nlohmann::json to_json(const AccuracyReport& r);

}  // namespace energyopt::ts
