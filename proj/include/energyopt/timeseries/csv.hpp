#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "energyopt/timeseries/time_series.hpp"

namespace energyopt::ts {

/// Column layout of a series CSV. The header row is required; the timestamp
/// column holds ISO 8601 UTC stamps and each value column becomes one meter.
/// Empty cells, "NA" and "NaN" are read as missing.
struct CsvSchema {
  std::string timestamp_column = "timestamp";
  std::vector<std::string> value_columns;  // empty: every other column
  std::string unit = "kWh";
  std::optional<Duration> resolution;      // required only for single-row files
};

std::vector<MeterRecord> ingest_csv(const std::string& path, const CsvSchema& schema = {});

/// Reads "meter_id,<label>,<label>..." and attaches the labels to matching
/// records. Unknown meter ids are ignored.
void attach_labels(std::vector<MeterRecord>& records, const std::string& labels_path);

/// Aligned series side by side under a shared timestamp column; values use
/// the shortest round-trip representation.
std::string to_csv(const std::vector<std::pair<std::string, TimeSeries>>& columns);
void write_csv(const std::string& path, const std::vector<std::pair<std::string, TimeSeries>>& columns);

/// Looks up a column by meter id; throws ValidationError if absent.
const TimeSeries& column(const std::vector<MeterRecord>& records, const std::string& name);

}  // namespace energyopt::ts
