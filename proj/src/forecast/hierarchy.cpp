#include "energyopt/forecast/hierarchy.hpp"

#include <set>

#include "energyopt/error.hpp"

namespace energyopt::forecast {

std::string to_string(Level level) {
  switch (level) {
    case Level::meter: return "meter";
    case Level::contract: return "contract";
    case Level::sector: return "sector";
    case Level::district: return "district";
    case Level::portfolio: return "portfolio";
  }
  return "meter";
}

Level parse_level(const std::string& name) {
  for (Level l : {Level::meter, Level::contract, Level::sector, Level::district, Level::portfolio}) {
    if (to_string(l) == name) return l;
  }
  throw ValidationError("unknown hierarchy level '" + name + "'");
}

namespace {

void link(std::map<std::string, std::string>& edges, const std::string& child, const std::string& parent,
          const char* what) {
  const auto [it, inserted] = edges.emplace(child, parent);
  if (!inserted && it->second != parent) {
    throw ValidationError(std::string(what) + " '" + child + "' has two parents: '" + it->second + "' and '" +
                          parent + "'");
  }
}

}  // namespace

Hierarchy Hierarchy::from_labels(const std::vector<ts::MeterRecord>& meters) {
  Hierarchy h;
  for (const auto& m : meters) {
    const auto label = [&](const char* key) {
      const auto it = m.labels.find(key);
      if (it == m.labels.end() || it->second.empty()) {
        throw ValidationError("meter '" + m.meter_id + "' has no '" + key + "' label");
      }
      return it->second;
    };
    const auto contract = label("contract");
    const auto sector = label("sector");
    const auto district = label("district");
    link(h.meter_to_contract, m.meter_id, contract, "meter");
    link(h.contract_to_sector, contract, sector, "contract");
    link(h.sector_to_district, sector, district, "sector");
  }
  return h;
}

std::string Hierarchy::node_of(const std::string& meter_id, Level level) const {
  const auto up = [](const std::map<std::string, std::string>& edges, const std::string& id) {
    const auto it = edges.find(id);
    if (it == edges.end()) throw ValidationError("'" + id + "' is missing from the hierarchy");
    return it->second;
  };
  std::string node = meter_id;
  if (level == Level::meter) {
    up(meter_to_contract, node);
    return node;
  }
  node = up(meter_to_contract, node);
  if (level == Level::contract) return node;
  node = up(contract_to_sector, node);
  if (level == Level::sector) return node;
  node = up(sector_to_district, node);
  if (level == Level::district) return node;
  return kPortfolioNode;
}

std::map<std::string, std::vector<std::string>> Hierarchy::children(Level level) const {
  std::map<std::string, std::vector<std::string>> out;
  const std::map<std::string, std::string>* edges = nullptr;
  switch (level) {
    case Level::meter: throw ValidationError("meters have no children");
    case Level::contract: edges = &meter_to_contract; break;
    case Level::sector: edges = &contract_to_sector; break;
    case Level::district: edges = &sector_to_district; break;
    case Level::portfolio: {
      std::set<std::string> districts;
      for (const auto& [sector, district] : sector_to_district) districts.insert(district);
      out[kPortfolioNode].assign(districts.begin(), districts.end());
      return out;
    }
  }
  for (const auto& [child, parent] : *edges) out[parent].push_back(child);
  return out;
}

namespace {

ts::TimeSeries sum_children(const std::vector<std::string>& kids, const std::map<std::string, ts::TimeSeries>& below) {
  ts::TimeSeries total;
  bool first = true;
  for (const auto& kid : kids) {
    const auto& s = below.at(kid);
    if (first) {
      total = s;
      first = false;
      continue;
    }
    ts::require_aligned(total, s, "aggregate_bottom_up '" + kid + "'");
    for (std::size_t k = 0; k < s.size(); ++k) total[k] += s[k];
  }
  return total;
}

}  // namespace

std::map<std::string, ts::TimeSeries> aggregate_bottom_up(const std::map<std::string, ts::TimeSeries>& meter_series,
                                                          const Hierarchy& hierarchy, Level level) {
  for (const auto& [id, s] : meter_series) {
    if (!hierarchy.meter_to_contract.contains(id)) {
      throw ValidationError("meter '" + id + "' is missing from the hierarchy");
    }
  }
  for (const auto& [id, contract] : hierarchy.meter_to_contract) {
    if (!meter_series.contains(id)) throw ValidationError("no series for meter '" + id + "'");
  }
  if (level == Level::meter) return meter_series;
  std::map<std::string, ts::TimeSeries> current = meter_series;
  for (Level l : {Level::contract, Level::sector, Level::district, Level::portfolio}) {
    std::map<std::string, ts::TimeSeries> next;
    for (const auto& [node, kids] : hierarchy.children(l)) next[node] = sum_children(kids, current);
    current = std::move(next);
    if (l == level) break;
  }
  return current;
}

}  // namespace energyopt::forecast
