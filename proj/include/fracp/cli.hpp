#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fracp/domain.hpp"
#include "fracp/eigensolver.hpp"

namespace fracp::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNotConverged = 2, kViolation = 3 };

struct ExperimentConfig {
  std::vector<double> distances;
  double radius = 0.5;
  double tol_fk = 0.02;
  double hks_slack = 0.02;
  bool nodal_check = false;
  std::uint64_t samples = 1000000;
};

struct RunConfig {
  Params params;
  ShapeSpec shape;
  double h = 1.0 / 64.0;
  double trunc_factor = kDefaultTruncFactor;
  SolverOptions solver;
  ExperimentConfig experiment;
  std::string output;
  std::uint64_t seed = 1;
};

/// Parses and validates a JSON config. Unknown keys and invalid values raise
/// fracp::Error with a message naming the key.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Writes text to path through a temporary file and a rename.
void write_atomically(const std::filesystem::path& path, const std::string& text);

int cmd_lambda1(const RunConfig& cfg, std::ostream& log);
int cmd_lambda2(const RunConfig& cfg, std::ostream& log);
int cmd_hks_sweep(const RunConfig& cfg, std::ostream& log);
int cmd_faber_krahn(const RunConfig& cfg, std::ostream& log);
int cmd_propcheck(const RunConfig& cfg, std::ostream& log);
int cmd_oracle_compare(const RunConfig& cfg, std::ostream& log);

std::vector<std::string> subcommands();

/// Dispatches a subcommand by name, mapping errors to exit codes.
int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& log);

/// Full entry point: load config, apply overrides, run. Config failures exit 1.
int run_from_file(const std::string& subcommand, const std::filesystem::path& config,
                  const std::optional<std::string>& out, std::optional<std::uint64_t> seed,
                  std::optional<int> threads, std::ostream& log);

}  // namespace fracp::cli
