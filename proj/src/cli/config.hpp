#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "energyopt/error.hpp"
#include "energyopt/milp/problem.hpp"
#include "energyopt/timeseries/time_series.hpp"

namespace energyopt::cli {

using nlohmann::json;

// Thrown for anything wrong with the config or its referenced files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A JSON object that remembers which keys were read, so leftovers can be
// reported as unknown once a command has taken what it needs.
class Section {
 public:
  Section(const json& node, std::string path);

  bool has(const std::string& key) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::optional<double> optional_number(const std::string& key) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::vector<std::string> texts(const std::string& key) const;
  const json& raw(const std::string& key) const;

  // Child objects are tracked too; finish() checks them recursively.
  Section& child(const std::string& key);
  bool has_child(const std::string& key) const { return has(key); }

  void finish() const;
  const std::string& path() const { return path_; }

 private:
  const json& at(const std::string& key) const;

  const json& node_;
  std::string path_;
  mutable std::set<std::string> used_;
  std::map<std::string, std::unique_ptr<Section>> children_;
};

milp::SolveOptions solve_options(Section& s);

// Staged output files, written only when the whole command has succeeded.
struct Outputs {
  std::map<std::string, std::string> files;
  void add(const std::string& name, std::string content);
  void add_json(const std::string& name, const json& j);
};

struct Input {
  std::string name;  // as written in the config
  std::filesystem::path path;
  std::string bytes;
};

class Context {
 public:
  Context(Section& root, std::filesystem::path base_dir, std::uint64_t seed, std::ostream* log);

  Section& root() { return root_; }
  std::uint64_t seed() const { return seed_; }
  void note(const std::string& message) const;

  // Resolves `key` in `section` against the config directory, reads the file
  // and records it for the manifest.
  const Input& input(Section& section, const std::string& key);
  // Reads the CSV named by `key`; every column is returned by name.
  std::map<std::string, ts::TimeSeries> series(Section& section, const std::string& key);
  const std::vector<Input>& inputs() const { return inputs_; }

  Outputs out;

 private:
  Section& root_;
  std::filesystem::path base_;
  std::uint64_t seed_;
  std::ostream* log_;
  std::vector<Input> inputs_;
};

ts::TimeSeries require_column(const std::map<std::string, ts::TimeSeries>& table, const std::string& name,
                              const std::string& file, const std::string& unit = {});

// Each command reads its own section of the config and stages outputs.
void run_forecast(Context& ctx);
void run_fit_building(Context& ctx);
void run_mpc(Context& ctx);
void run_pareto(Context& ctx);
void run_chp(Context& ctx);
void run_ems(Context& ctx);
// Writes the bundled dataset and a sample config into the staged outputs.
void run_synth(Context& ctx);

// Shortest round-trip text for a double, "NaN" never appears: missing is "".
std::string fmt(double v);

}  // namespace energyopt::cli
