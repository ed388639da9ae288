#include "energyopt/timeseries/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "energyopt/error.hpp"

namespace energyopt::ts {

AccuracyReport score(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size()) {
    throw ValidationError("score: actual has " + std::to_string(actual.size()) + " values, predicted has " +
                          std::to_string(predicted.size()));
  }
  AccuracyReport r;
  double abs_sum = 0.0, sq_sum = 0.0, abs_actual = 0.0, actual_sum = 0.0;
  double pct_sum = 0.0, smape_sum = 0.0;
  std::size_t pct_n = 0;
  for (std::size_t k = 0; k < actual.size(); ++k) {
    const double a = actual[k];
    const double p = predicted[k];
    if (is_missing(a) || is_missing(p)) continue;
    const double e = p - a;
    abs_sum += std::abs(e);
    sq_sum += e * e;
    abs_actual += std::abs(a);
    actual_sum += a;
    if (a != 0.0) {
      pct_sum += std::abs(e / a);
      ++pct_n;
    }
    const double denom = std::abs(a) + std::abs(p);
    if (denom > 0.0) smape_sum += 2.0 * std::abs(e) / denom;
    ++r.n;
  }
  if (r.n == 0) throw ValidationError("score: no overlapping non-missing values");
  const auto n = static_cast<double>(r.n);
  r.mae = abs_sum / n;
  // sqrt(mean e^2) >= mean |e| exactly; max() only absorbs rounding.
  r.rmse = std::max(std::sqrt(sq_sum / n), r.mae);
  r.mape = pct_n > 0 ? pct_sum / static_cast<double>(pct_n) : kMissing;
  r.nmae = abs_actual > 0.0 ? r.mae / (abs_actual / n) : kMissing;
  r.smape = smape_sum / n;
  const double mean = actual_sum / n;
  double sst = 0.0;
  for (std::size_t k = 0; k < actual.size(); ++k) {
    if (is_missing(actual[k]) || is_missing(predicted[k])) continue;
    sst += (actual[k] - mean) * (actual[k] - mean);
  }
  r.r2 = sst > 0.0 ? 1.0 - sq_sum / sst : kMissing;
  return r;
}

AccuracyReport score(const TimeSeries& actual, const TimeSeries& predicted) {
  if (actual.size() != predicted.size()) {
    throw ValidationError("score: actual has " + std::to_string(actual.size()) + " values, predicted has " +
                          std::to_string(predicted.size()));
  }
  if (actual.start != predicted.start || actual.resolution != predicted.resolution) {
    throw ValidationError("score: timestamps are not aligned");
  }
  return score(std::span<const double>(actual.values), std::span<const double>(predicted.values));
}

nlohmann::json to_json(const AccuracyReport& r) {
  const auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return nlohmann::json{{"mae", num(r.mae)},     {"mape", num(r.mape)}, {"rmse", num(r.rmse)},
                        {"nmae", num(r.nmae)},   {"smape", num(r.smape)}, {"r2", num(r.r2)},
                        {"n", r.n}};
}

}  // namespace energyopt::ts
