#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fracp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fractional p-Laplacian eigenvalue experiments"};
  app.require_subcommand(1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string chosen;

  for (const std::string& name : fracp::cli::subcommands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "JSON experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output path (overrides the config)");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "Seed (overrides the config)");
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fracp::cli::kConfigError;
  }

  const CLI::App* sub = app.get_subcommand(chosen);
  std::optional<std::string> out_override;
  if (sub->count("--out") > 0) out_override = out;
  std::optional<std::uint64_t> seed_override;
  if (sub->count("--seed") > 0) seed_override = seed;
  std::optional<int> threads_override;
  if (sub->count("--threads") > 0) threads_override = threads;
  return fracp::cli::run_from_file(chosen, config, out_override, seed_override, threads_override,
                                   std::cerr);
}
