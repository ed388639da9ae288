#include <iostream>

#include "CLI11.hpp"

#include "energyopt/cli/app.hpp"

int main(int argc, char** argv) {
  namespace cli = energyopt::cli;
  CLI::App app{"energyopt: forecasting, building MPC, CHP and battery dispatch scenarios"};
  app.require_subcommand(1);
  cli::Options opts;
  std::string out;
  std::uint64_t seed = 0;
  for (const auto& name : cli::commands()) {
    auto* sub = app.add_subcommand(name);
    auto* config = sub->add_option("--config", opts.config_path, "JSON run configuration");
    if (name != "synth") config->required();
    sub->add_option("--out", out, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "random seed (overrides seed)");
    sub->add_flag("--verbose", opts.verbose, "progress on stderr");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "E_CONFIG: " << e.what() << '\n';
    return cli::kConfigError;
  }
  auto* sub = app.get_subcommands().front();
  opts.command = sub->get_name();
  if (sub->count("--out") > 0) opts.out_dir = out;
  if (sub->count("--seed") > 0) opts.seed = seed;
  return cli::run(opts, std::cerr, std::cerr);
}
