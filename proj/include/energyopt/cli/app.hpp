#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace energyopt::cli {

struct Options {
  std::string command;
  std::string config_path;  // may be empty for `synth`
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
};

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kConfigError = 2,
  kInfeasible = 3,
  kSolverLimit = 4,
};

const std::vector<std::string>& commands();

/// Runs one command. Progress goes to `log` when verbose; failures print a
/// single line "E_<CODE>: detail" to `err`. Nothing is written to the output
/// directory unless the command succeeds.
int run(const Options& opts, std::ostream& log, std::ostream& err);

/// 64-bit FNV-1a, used for the config and file hashes in manifest.json.
std::uint64_t fnv1a(std::string_view bytes);

}  // namespace energyopt::cli
