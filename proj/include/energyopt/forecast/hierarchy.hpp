#pragma once

#include <map>
#include <string>
#include <vector>

#include "energyopt/timeseries/time_series.hpp"

namespace energyopt::forecast {

enum class Level { meter, contract, sector, district, portfolio };

std::string to_string(Level level);
Level parse_level(const std::string& name);

inline const std::string kPortfolioNode = "portfolio";

/// Tree meter -> contract -> sector -> district -> portfolio. Each map sends a
/// node to its unique parent one level up.
struct Hierarchy {
  std::map<std::string, std::string> meter_to_contract;
  std::map<std::string, std::string> contract_to_sector;
  std::map<std::string, std::string> sector_to_district;

  /// Builds the tree from "contract", "sector" and "district" meter labels.
  /// Throws ValidationError if a meter lacks a label or a node has two parents.
  static Hierarchy from_labels(const std::vector<ts::MeterRecord>& meters);

  /// Node at `level` that contains the meter.
  std::string node_of(const std::string& meter_id, Level level) const;

  /// Children of every node at `level` (which must be above meter level).
  std::map<std::string, std::vector<std::string>> children(Level level) const;
};

/// Sum of descendant meter series for every node at `level`. Each level is
/// built from the level below, so every parent equals the sum of its children.
std::map<std::string, ts::TimeSeries> aggregate_bottom_up(const std::map<std::string, ts::TimeSeries>& meter_series,
                                                          const Hierarchy& hierarchy, Level level);

}  // namespace energyopt::forecast
