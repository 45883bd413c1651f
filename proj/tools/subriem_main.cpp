// Command-line front end. Talks to the library through the public C API
// only. Exit codes: 0 all checks passed, 1 a check failed, 2 bad input,
// 3 numerical failure.
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subriem/subriem.h"

namespace {

struct CommonFlags {
  double tolAlgebraic = 0.0;
  double tolNumeric = 0.0;
  std::uint64_t seed = 0;
  std::string outputDir;
  CLI::Option* tolAlgebraicOpt = nullptr;
  CLI::Option* tolNumericOpt = nullptr;
  CLI::Option* seedOpt = nullptr;
  CLI::Option* outputDirOpt = nullptr;

  void attach(CLI::App* cmd) {
    tolAlgebraicOpt = cmd->add_option("--tol-algebraic", tolAlgebraic,
                                      "Tolerance for algebraic identities");
    tolNumericOpt = cmd->add_option("--tol-numeric", tolNumeric,
                                    "Tolerance for numerical checks");
    seedOpt = cmd->add_option("--seed", seed, "Seed for probe sampling");
    outputDirOpt =
        cmd->add_option("--out", outputDir, "Output directory root");
  }

  sr_run_options toOptions() const {
    sr_run_options options{};
    options.has_tol_algebraic = tolAlgebraicOpt->count() > 0 ? 1 : 0;
    options.tol_algebraic = tolAlgebraic;
    options.has_tol_numeric = tolNumericOpt->count() > 0 ? 1 : 0;
    options.tol_numeric = tolNumeric;
    options.has_seed = seedOpt->count() > 0 ? 1 : 0;
    options.seed = seed;
    options.output_dir =
        outputDirOpt->count() > 0 ? outputDir.c_str() : nullptr;
    return options;
  }
};

int statusToExit(sr_status status) {
  switch (status) {
    case SR_OK:
      return 0;
    case SR_ERR_INPUT:
    case SR_ERR_GEOMETRY:
      return 2;
    default:
      return 3;
  }
}

int reportFailure(sr_status status) {
  std::fprintf(stderr, "error: %s\n", sr_last_error());
  return statusToExit(status);
}

int printListing(sr_status (*lister)(char*, size_t, size_t*)) {
  size_t needed = 0;
  sr_status status = lister(nullptr, 0, &needed);
  if (status != SR_OK) {
    return reportFailure(status);
  }
  std::vector<char> buffer(needed);
  status = lister(buffer.data(), buffer.size(), &needed);
  if (status != SR_OK) {
    return reportFailure(status);
  }
  std::fputs(buffer.data(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-Riemannian geodesic curvature toolkit"};
  app.require_subcommand(1);

  std::string configPath;
  CLI::App* run = app.add_subcommand(
      "run", "Run the experiments described in a config file");
  run->add_option("config", configPath, "Path to the config file")
      ->required();
  CommonFlags runFlags;
  runFlags.attach(run);

  std::string modelName;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the full check suite against a built-in model");
  verify->add_option("model", modelName, "Built-in model name")->required();
  CommonFlags verifyFlags;
  verifyFlags.attach(verify);

  CLI::App* listModels =
      app.add_subcommand("list-models", "List the built-in models");
  CLI::App* listChecks =
      app.add_subcommand("list-checks", "List the available checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (run->parsed()) {
    const sr_run_options options = runFlags.toOptions();
    int exitCode = 0;
    const sr_status status =
        sr_run_experiment(configPath.c_str(), &options, &exitCode);
    return status == SR_OK ? exitCode : reportFailure(status);
  }
  if (verify->parsed()) {
    const sr_run_options options = verifyFlags.toOptions();
    int exitCode = 0;
    const sr_status status =
        sr_verify_model(modelName.c_str(), &options, &exitCode);
    return status == SR_OK ? exitCode : reportFailure(status);
  }
  if (listModels->parsed()) {
    return printListing(sr_list_models);
  }
  if (listChecks->parsed()) {
    return printListing(sr_list_checks);
  }
  return 2;
}
