#include "energyopt/timeseries/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "energyopt/error.hpp"

namespace energyopt::ts {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_value(const std::string& cell, std::size_t line_no, const std::string& column) {
  if (cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan") return kMissing;
  double v = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ValidationError("line " + std::to_string(line_no) + ": unparseable value '" + cell + "' in column '" +
                          column + "'");
  }
  return v;
}

}  // namespace

std::vector<MeterRecord> ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("'" + path + "' is empty; a header row is required");
  const auto header = split(line);
  const auto ts_it = std::find(header.begin(), header.end(), schema.timestamp_column);
  if (ts_it == header.end()) {
    throw ValidationError("'" + path + "' has no '" + schema.timestamp_column + "' column");
  }
  const auto ts_col = static_cast<std::size_t>(ts_it - header.begin());
  std::vector<std::size_t> value_cols;
  std::vector<std::string> names;
  if (schema.value_columns.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == ts_col) continue;
      value_cols.push_back(c);
      names.push_back(header[c]);
    }
  } else {
    for (const auto& name : schema.value_columns) {
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end()) throw ValidationError("'" + path + "' has no column '" + name + "'");
      value_cols.push_back(static_cast<std::size_t>(it - header.begin()));
      names.push_back(name);
    }
  }
  if (value_cols.empty()) throw ValidationError("'" + path + "' has no value columns");

  struct Row {
    TimePoint t;
    std::size_t line_no;
    std::vector<double> values;
  };
  std::vector<Row> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ValidationError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                            " fields, got " + std::to_string(cells.size()));
    }
    Row row;
    try {
      row.t = parse_iso8601(cells[ts_col]);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
    row.line_no = line_no;
    for (std::size_t k = 0; k < value_cols.size(); ++k) {
      row.values.push_back(parse_value(cells[value_cols[k]], line_no, names[k]));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError("'" + path + "' has no data rows");
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });

  Duration resolution{};
  if (rows.size() >= 2) {
    resolution = rows[1].t - rows[0].t;
  } else if (schema.resolution) {
    resolution = *schema.resolution;
  } else {
    throw ValidationError("'" + path + "' has a single row and no declared resolution");
  }
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto step = rows[k].t - rows[k - 1].t;
    if (step.count() == 0) {
      throw ValidationError("line " + std::to_string(rows[k].line_no) + ": duplicate timestamp " +
                            format_iso8601(rows[k].t));
    }
    if (step != resolution) {
      throw ValidationError("non-uniform spacing at " + format_iso8601(rows[k].t) +
                            "; resample or fill the series to a uniform resolution first");
    }
  }

  std::vector<MeterRecord> records;
  for (std::size_t k = 0; k < value_cols.size(); ++k) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(r.values[k]);
    records.push_back({names[k], TimeSeries(rows.front().t, resolution, std::move(v), schema.unit), {}});
  }
  for (std::size_t a = 0; a < records.size(); ++a) {
    for (std::size_t b = a + 1; b < records.size(); ++b) {
      if (records[a].meter_id == records[b].meter_id) {
        throw ValidationError("duplicate meter id '" + records[a].meter_id + "'");
      }
    }
  }
  return records;
}

void attach_labels(std::vector<MeterRecord>& records, const std::string& labels_path) {
  std::ifstream in(labels_path);
  if (!in) throw ValidationError("cannot open '" + labels_path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("'" + labels_path + "' is empty");
  const auto header = split(line);
  if (header.empty() || header[0] != "meter_id") {
    throw ValidationError("'" + labels_path + "' must start with a meter_id column");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ValidationError(labels_path + " line " + std::to_string(line_no) + ": wrong field count");
    }
    for (auto& r : records) {
      if (r.meter_id != cells[0]) continue;
      for (std::size_t c = 1; c < header.size(); ++c) r.labels[header[c]] = cells[c];
    }
  }
}

std::string to_csv(const std::vector<std::pair<std::string, TimeSeries>>& columns) {
  if (columns.empty()) throw ValidationError("no columns to format");
  const auto& first = columns.front().second;
  for (const auto& [name, s] : columns) require_aligned(first, s, "CSV column '" + name + "'");
  std::string out = "timestamp";
  for (const auto& [name, s] : columns) out += ',' + name;
  out += '\n';
  char buf[64];
  for (std::size_t k = 0; k < first.size(); ++k) {
    out += format_iso8601(first.time_at(k));
    for (const auto& [name, s] : columns) {
      out += ',';
      if (is_missing(s[k])) continue;
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, s[k]);
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<std::pair<std::string, TimeSeries>>& columns) {
  const std::string text = to_csv(columns);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << text;
}

const TimeSeries& column(const std::vector<MeterRecord>& records, const std::string& name) {
  for (const auto& r : records) {
    if (r.meter_id == name) return r.series;
  }
  throw ValidationError("missing column '" + name + "'");
}

}  // namespace energyopt::ts
