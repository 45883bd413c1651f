// Experiment runner, model verification, and listings behind the CLI verbs.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace subriem {

// Command-line overrides. Unset fields fall back to config values and then
// to built-in defaults.
struct RunOptions {
  std::optional<double> tolAlgebraic;
  std::optional<double> tolNumeric;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> outputDir;
};

// Runs every experiment in the config file, writing trajectory and curvature
// CSV files plus report.json per experiment. Returns 0 when all requested
// checks pass and 1 otherwise. Throws on bad input or numerical failure.
int runExperiment(const std::string& configPath, const RunOptions& opts,
                  std::ostream& out);

// Runs the full model-level check suite against one built-in model and
// prints a result table. Returns 0 when all checks pass and 1 otherwise.
int verifyModel(const std::string& modelName, const RunOptions& opts,
                std::ostream& out);

void listModels(std::ostream& out);

void listChecks(std::ostream& out);

}  // namespace subriem
