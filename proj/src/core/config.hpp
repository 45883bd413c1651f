// Experiment config file model and parser.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/linalg.hpp"

namespace subriem {

// One `k i j value` structure-constant entry, indices 1-based as written.
struct CarnotEntry {
  int k = 0;
  int i = 0;
  int j = 0;
  double value = 0.0;
};

// An initial condition is given either as a phase point (x0, lambda0) or as
// base data (y0, v, optional alpha) to be lifted by the model.
struct InitialConditionSpec {
  std::optional<Vec> x0;
  std::optional<Vec> lambda0;
  std::optional<Vec> y0;
  std::optional<Vec> alpha;
  std::optional<Vec> v;

  bool phaseStyle() const { return x0.has_value(); }
};

struct ExperimentConfig {
  std::string name;
  std::string model;
  std::optional<std::uint64_t> seed;
  double horizon = 5.0;
  double step = 1e-3;
  std::vector<std::string> checks;
  std::string outputDir;
  std::optional<double> tolAlgebraic;
  std::optional<double> tolNumeric;
  std::vector<InitialConditionSpec> initialConditions;
  std::optional<int> carnotBaseDim;
  std::optional<int> carnotManifoldDim;
  std::vector<CarnotEntry> carnotEntries;
};

struct ConfigFile {
  std::vector<ExperimentConfig> experiments;
};

// Parses config text. sourceName is used in error messages. Throws
// InputError on malformed syntax, unknown keys, or inconsistent sections.
ConfigFile parseConfigText(const std::string& text,
                           const std::string& sourceName);

// Reads and parses a config file from disk.
ConfigFile parseConfigFile(const std::string& path);

}  // namespace subriem
