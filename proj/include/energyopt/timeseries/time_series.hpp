#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace energyopt::ts {

using TimePoint = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) { return std::isnan(v); }

/// Uniformly sampled series: value k is at start + k * resolution. Missing
/// entries are NaN.
struct TimeSeries {
  TimePoint start{};
  Duration resolution{1800};
  std::vector<double> values;
  std::string unit;

  TimeSeries() = default;
  TimeSeries(TimePoint start, Duration resolution, std::vector<double> values, std::string unit = {});

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  double operator[](std::size_t k) const { return values[k]; }
  double& operator[](std::size_t k) { return values[k]; }

  TimePoint time_at(std::size_t k) const { return start + resolution * static_cast<long long>(k); }
  TimePoint end() const { return time_at(values.size()); }
  double step_hours() const { return static_cast<double>(resolution.count()) / 3600.0; }

  std::size_t count_missing() const;
  TimeSeries slice(std::size_t from, std::size_t to) const;

  /// Same start, resolution and length.
  bool aligned_with(const TimeSeries& other) const;
};

/// Units that measure an amount per step (kWh, g, ...) rather than a rate or
/// intensity; they are summed or split when resampling.
bool is_extensive_unit(const std::string& unit);

/// Throws ValidationError if the two series are not aligned.
void require_aligned(const TimeSeries& a, const TimeSeries& b, const std::string& what);

/// ISO 8601 UTC: "YYYY-MM-DDTHH:MM[:SS][Z|+00:00]" (a space may replace 'T').
TimePoint parse_iso8601(const std::string& text);
std::string format_iso8601(TimePoint t);

/// Hours since UTC midnight of the step's start, and weekday (0 = Sunday).
int hour_of_day(TimePoint t);
int minute_of_day(TimePoint t);
int weekday(TimePoint t);
/// Days since the Unix epoch (UTC).
long long day_index(TimePoint t);

struct MeterRecord {
  std::string meter_id;
  TimeSeries series;
  std::map<std::string, std::string> labels;
};

}  // namespace energyopt::ts
