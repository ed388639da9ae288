#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "energyopt/timeseries/csv.hpp"

namespace energyopt::cli {

Section::Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
  if (!node_.is_object()) throw ConfigError(path_ + " must be an object");
}

bool Section::has(const std::string& key) const { return node_.contains(key); }

const json& Section::at(const std::string& key) const {
  if (!node_.contains(key)) throw ConfigError(path_ + "." + key + " is required");
  used_.insert(key);
  return node_.at(key);
}

const json& Section::raw(const std::string& key) const { return at(key); }

double Section::number(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_number()) throw ConfigError(path_ + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(path_ + "." + key + " must be finite");
  return d;
}

double Section::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::optional<double> Section::optional_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  if (node_.at(key).is_null()) {
    used_.insert(key);
    return std::nullopt;
  }
  return number(key);
}

std::size_t Section::count(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(path_ + "." + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::uint64_t Section::u64(const std::string& key, std::uint64_t fallback) const {
  return static_cast<std::uint64_t>(count(key, static_cast<std::size_t>(fallback)));
}

bool Section::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = at(key);
  if (!v.is_boolean()) throw ConfigError(path_ + "." + key + " must be true or false");
  return v.get<bool>();
}

std::string Section::text(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_string()) throw ConfigError(path_ + "." + key + " must be a string");
  return v.get<std::string>();
}

std::string Section::text(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

std::vector<std::string> Section::texts(const std::string& key) const {
  const auto& v = at(key);
  if (!v.is_array()) throw ConfigError(path_ + "." + key + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError(path_ + "." + key + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Section& Section::child(const std::string& key) {
  auto it = children_.find(key);
  if (it != children_.end()) return *it->second;
  auto s = std::make_unique<Section>(at(key), path_ + "." + key);
  return *children_.emplace(key, std::move(s)).first->second;
}

void Section::finish() const {
  for (const auto& [key, value] : node_.items()) {
    if (!used_.count(key)) throw ConfigError("unknown key " + path_ + "." + key);
  }
  for (const auto& [key, c] : children_) c->finish();
}

milp::SolveOptions solve_options(Section& s) {
  milp::SolveOptions o;
  o.rel_gap = s.number("rel_gap", o.rel_gap);
  o.max_nodes = s.count("max_nodes", o.max_nodes);
  o.max_lp_iterations = s.count("max_lp_iterations", o.max_lp_iterations);
  o.time_limit = s.optional_number("time_limit");
  try {
    o.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(s.path() + ": " + e.what());
  }
  return o;
}

void Outputs::add(const std::string& name, std::string content) { files[name] = std::move(content); }

void Outputs::add_json(const std::string& name, const json& j) { add(name, j.dump(2) + "\n"); }

Context::Context(Section& root, std::filesystem::path base_dir, std::uint64_t seed, std::ostream* log)
    : root_(root), base_(std::move(base_dir)), seed_(seed), log_(log) {}

void Context::note(const std::string& message) const {
  if (log_) *log_ << message << '\n';
}

const Input& Context::input(Section& section, const std::string& key) {
  const auto name = section.text(key);
  const auto path = base_ / name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(section.path() + "." + key + ": cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  inputs_.push_back({name, path, buf.str()});
  note("read " + path.string());
  return inputs_.back();
}

std::map<std::string, ts::TimeSeries> Context::series(Section& section, const std::string& key) {
  const auto& in = input(section, key);
  std::map<std::string, ts::TimeSeries> out;
  for (auto& rec : ts::ingest_csv(in.path.string())) out.emplace(rec.meter_id, std::move(rec.series));
  return out;
}

ts::TimeSeries require_column(const std::map<std::string, ts::TimeSeries>& table, const std::string& name,
                              const std::string& file, const std::string& unit) {
  auto it = table.find(name);
  if (it == table.end()) throw ConfigError(file + " has no column '" + name + "'");
  auto s = it->second;
  if (!unit.empty()) s.unit = unit;
  return s;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace energyopt::cli
