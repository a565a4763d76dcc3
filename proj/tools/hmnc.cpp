#include "hmnc/harness.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char **argv)
{
  using namespace hmnc::harness;

  CLI::App app{"Measures of noncompactness in Hilbert C*-modules: verification and measurement runs"};
  app.require_subcommand(1);

  RunOptions options;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", options.config, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--out", options.out, "Output directory")->capture_default_str();
    // Hidden: re-checks solver results against the brute-force oracles.
    sub->add_flag("--audit-oracle", options.audit_oracle)->group("");
  };
  add_common(app.add_subcommand("verify", "Run the invariant suites; exit 1 if any fails"));
  add_common(app.add_subcommand("measure", "Write lambda profiles and brackets for every descriptor"));
  add_common(app.add_subcommand("witness", "Build and validate a witness certificate"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? exit_pass : exit_config;
  }

  options.command = app.get_subcommands().front()->get_name();
  if (app.get_subcommands().front()->count("--seed"))
    options.seed = seed;
  return run(options, std::cout, std::cerr);
}
