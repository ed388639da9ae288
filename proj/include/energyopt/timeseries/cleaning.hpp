#pragma once

#include <cstddef>
#include <vector>

#include "energyopt/timeseries/time_series.hpp"

namespace energyopt::ts {

/// Changes resolution by an integer factor either way. Extensive units (kWh)
/// are summed when coarsening and split evenly when refining; everything else
/// is averaged or held. A coarse bucket with any missing input is missing.
TimeSeries resample(const TimeSeries& s, Duration target);

struct Gap {
  std::size_t start;
  std::size_t length;
};

struct GapFillResult {
  TimeSeries series;
  std::vector<Gap> unfilled;  // runs longer than max_gap, or touching an end
};

/// Linearly interpolates interior runs of at most `max_gap` missing values.
GapFillResult fill_gaps(const TimeSeries& s, std::size_t max_gap);

struct AnomalyOptions {
  double z_threshold = 4.0;
  std::size_t half_window = 24;  // rolling window is 2*half_window+1 steps
};

/// Robust z-score |x - rolling median| / (1.4826 * rolling MAD). When the MAD
/// is zero the mean absolute deviation (scaled by 1.2533) is used instead.
/// Returns flagged indices in increasing order.
std::vector<std::size_t> detect_anomalies(const TimeSeries& s, const AnomalyOptions& opts = {});

struct MeterPartition {
  std::vector<MeterRecord> kept;
  std::vector<MeterRecord> rejected;
};

/// Keeps a meter iff its non-missing fraction over [from, to) is at least
/// `min_completeness`. Steps outside a meter's own range count as missing.
MeterPartition filter_meters(const std::vector<MeterRecord>& records, double min_completeness, TimePoint from,
                             TimePoint to);

}  // namespace energyopt::ts
