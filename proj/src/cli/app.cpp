#include "energyopt/cli/app.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "config.hpp"

namespace energyopt::cli {

namespace {

namespace fs = std::filesystem;

const std::map<std::string, std::function<void(Context&)>>& table() {
  static const std::map<std::string, std::function<void(Context&)>> t{
      {"forecast", run_forecast}, {"fit-building", run_fit_building}, {"mpc", run_mpc}, {"pareto", run_pareto},
      {"chp", run_chp},           {"ems", run_ems},                   {"synth", run_synth}};
  return t;
}

// Top-level sections any config may carry; a command only checks its own.
const char* const kSections[] = {"forecast", "fit_building", "building", "mpc",   "pareto",
                                 "chp",      "ems",          "solver",   "synth"};

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Failure {
  const char* code;
  int exit;
  std::string detail;
};

Failure run_command(const Options& opts, std::ostream& log, fs::path& out_dir, Outputs& staged) {
  std::string config_text = "{}";
  fs::path base = fs::current_path();
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config '" + opts.config_path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    config_text = buf.str();
    base = fs::path(opts.config_path).parent_path();
  } else if (opts.command != "synth") {
    throw ConfigError("--config is required for '" + opts.command + "'");
  }
  json doc;
  try {
    doc = json::parse(config_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Section root(doc, "config");
  const std::uint64_t seed = opts.seed ? *opts.seed : root.u64("seed", 1);
  if (root.has("seed")) root.raw("seed");
  if (opts.out_dir) {
    out_dir = *opts.out_dir;
    if (root.has("output_dir")) root.text("output_dir");
  } else if (root.has("output_dir")) {
    out_dir = base / root.text("output_dir");
  } else {
    throw ConfigError("no output directory: pass --out or set output_dir");
  }

  Context ctx(root, base, seed, opts.verbose ? &log : nullptr);
  table().at(opts.command)(ctx);
  for (const char* s : kSections) {
    if (root.has(s)) root.raw(s);
  }
  root.finish();

  json inputs = json::array();
  for (const auto& in : ctx.inputs()) {
    inputs.push_back({{"path", in.name}, {"fnv1a", hex(fnv1a(in.bytes))}, {"bytes", in.bytes.size()}});
  }
  json outputs = json::array();
  for (const auto& [name, content] : ctx.out.files) {
    outputs.push_back({{"file", name}, {"fnv1a", hex(fnv1a(content))}, {"bytes", content.size()}});
  }
  json manifest = {{"command", opts.command},
                   {"seed", seed},
                   {"config", {{"file", opts.config_path.empty() ? json(nullptr) : json(fs::path(opts.config_path).filename().string())},
                               {"fnv1a", hex(fnv1a(config_text))}}},
                   {"inputs", inputs},
                   {"outputs", outputs}};
  staged = std::move(ctx.out);
  staged.add_json("manifest.json", manifest);
  return {nullptr, kOk, {}};
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"forecast", "fit-building", "mpc", "pareto", "chp", "ems", "synth"};
  return names;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int run(const Options& opts, std::ostream& log, std::ostream& err) {
  Failure f{nullptr, kOk, {}};
  fs::path out_dir;
  Outputs staged;
  try {
    if (!table().contains(opts.command)) throw ConfigError("unknown command '" + opts.command + "'");
    f = run_command(opts, log, out_dir, staged);
  } catch (const ConfigError& e) {
    f = {"E_CONFIG", kConfigError, e.what()};
  } catch (const ValidationError& e) {
    f = {"E_CONFIG", kConfigError, e.what()};
  } catch (const UnidentifiableError& e) {
    f = {"E_UNIDENTIFIABLE", kConfigError, e.what()};
  } catch (const InfeasibleError& e) {
    f = {"E_INFEASIBLE", kInfeasible, e.what()};
  } catch (const SolverLimitError& e) {
    f = {"E_SOLVER_LIMIT", kSolverLimit, e.what()};
  } catch (const std::exception& e) {
    f = {"E_INTERNAL", kInternal, e.what()};
  }
  if (f.code == nullptr) {
    try {
      fs::create_directories(out_dir);
      for (const auto& [name, content] : staged.files) {
        std::ofstream out(out_dir / name, std::ios::binary);
        out << content;
        if (!out) throw std::runtime_error("cannot write '" + (out_dir / name).string() + "'");
      }
      if (opts.verbose) log << "wrote " << staged.files.size() << " files to " << out_dir.string() << '\n';
      return kOk;
    } catch (const std::exception& e) {
      f = {"E_IO", kInternal, e.what()};
    }
  }
  std::string detail = f.detail;
  for (auto& c : detail) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  err << f.code << ": " << detail << '\n';
  return f.exit;
}

}  // namespace energyopt::cli
