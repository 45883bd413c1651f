#include "core/experiment.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <set>

#include "core/config.hpp"
#include "core/criteria.hpp"
#include "core/errors.hpp"
#include "core/flows.hpp"
#include "core/frenet.hpp"
#include "core/geometry.hpp"
#include "core/metric_extension.hpp"
#include "core/models.hpp"
#include "core/report.hpp"
#include "core/rng.hpp"

namespace subriem {

namespace {

constexpr double kEnergyDriftTol = 1e-9;
constexpr double kStationaryEnergy = 1e-14;

const std::set<std::string>& trajectoryCheckNames() {
  static const std::set<std::string> names = {
      "constant-kappa1", "vanishing-kappa2", "energy-conservation"};
  return names;
}

std::string outputRoot(const RunOptions& opts, const std::string& configOut) {
  if (opts.outputDir) {
    return *opts.outputDir;
  }
  if (const char* env = std::getenv("SUBRIEM_OUT"); env != nullptr && *env) {
    return env;
  }
  if (!configOut.empty()) {
    return configOut;
  }
  return "out";
}

ModelPtr buildModel(const ExperimentConfig& config) {
  if (config.model != "carnot") {
    return makeModel(config.model);
  }
  const int n = *config.carnotBaseDim;
  const int m = *config.carnotManifoldDim;
  if (m <= n) {
    throw InputError("carnot.m must exceed carnot.n");
  }
  StructureConstants constants;
  constants.n = n;
  constants.verticalDim = m - n;
  constants.c = zeroTensor3(m - n, n, n);
  for (const CarnotEntry& entry : config.carnotEntries) {
    if (entry.k > m - n || entry.i > n || entry.j > n) {
      throw InputError("carnot.c entry index out of range");
    }
    if (entry.i == entry.j) {
      throw InputError("carnot.c entries need distinct frame indices");
    }
    constants.c[entry.k - 1](entry.i - 1, entry.j - 1) = entry.value;
  }
  for (int k = 0; k < m - n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (constants.c[k](i, j) != 0.0 && constants.c[k](j, i) == 0.0) {
          constants.c[k](j, i) = -constants.c[k](i, j);
        }
      }
    }
  }
  return step2Carnot(constants, "carnot");
}

struct ResolvedIc {
  Vec x0;
  Vec lambda0;
};

ResolvedIc resolveInitialCondition(const SubmersionModel& model,
                                   const InitialConditionSpec& spec,
                                   int index) {
  const std::string label = "ic." + std::to_string(index);
  ResolvedIc out;
  if (spec.phaseStyle()) {
    if (spec.x0->size() != model.chartDim() ||
        spec.lambda0->size() != model.chartDim()) {
      throw InputError(label + " needs " + std::to_string(model.chartDim()) +
                       " chart components");
    }
    out.x0 = *spec.x0;
    out.lambda0 = *spec.lambda0;
    return out;
  }
  if (spec.y0->size() != model.baseChartDim()) {
    throw InputError(label + ".y0 needs " +
                     std::to_string(model.baseChartDim()) + " components");
  }
  if (spec.v->size() != model.baseDim()) {
    throw InputError(label + ".v needs " + std::to_string(model.baseDim()) +
                     " components");
  }
  Vec alpha = Vec::Zero(model.verticalDim());
  if (spec.alpha) {
    if (spec.alpha->size() != model.verticalDim()) {
      throw InputError(label + ".alpha needs " +
                       std::to_string(model.verticalDim()) + " components");
    }
    alpha = *spec.alpha;
  }
  out.x0 = model.liftBasePoint(*spec.y0);
  out.lambda0 = horizontalCovector(model, out.x0, *spec.v) +
                annihilatorToChart(model, out.x0, alpha);
  return out;
}

CheckReport trajectoryCheck(const std::string& name, int icIndex,
                            const PhaseTrajectory& traj,
                            const CurvatureProfile& profile, double drift,
                            double tolNumeric) {
  CheckReport report;
  report.name = name + ".ic" + std::to_string(icIndex);
  report.samples = static_cast<int>(traj.times.size());
  if (name == "constant-kappa1") {
    report.maxResidual = profile.kappa1RelStd;
    report.tolerance = tolNumeric;
  } else if (name == "vanishing-kappa2") {
    report.maxResidual = profile.kappa2Max;
    report.tolerance = tolNumeric;
  } else {
    report.maxResidual = drift;
    report.tolerance = kEnergyDriftTol;
  }
  report.pass = report.maxResidual < report.tolerance;
  return report;
}

void printCheckLine(std::ostream& out, const CheckReport& report) {
  out << "  " << (report.pass ? "[PASS]" : "[FAIL]") << " " << std::left
      << std::setw(34) << report.name << std::right << " residual "
      << std::scientific << std::setprecision(3) << report.maxResidual
      << "  tolerance " << report.tolerance << std::defaultfloat << "\n";
}

}  // namespace

int runExperiment(const std::string& configPath, const RunOptions& opts,
                  std::ostream& out) {
  const ConfigFile file = parseConfigFile(configPath);
  bool allPass = true;

  for (const ExperimentConfig& config : file.experiments) {
    const ModelPtr model = buildModel(config);
    const std::uint64_t seed =
        opts.seed ? *opts.seed : config.seed.value_or(kDefaultSeed);
    const double tolAlgebraic =
        opts.tolAlgebraic ? *opts.tolAlgebraic
                          : config.tolAlgebraic.value_or(1e-10);
    const double tolNumeric =
        opts.tolNumeric ? *opts.tolNumeric : config.tolNumeric.value_or(1e-5);

    if (config.initialConditions.empty() && config.checks.empty()) {
      throw InputError("experiment '" + config.name +
                       "' has neither initial conditions nor checks");
    }

    namespace fs = std::filesystem;
    const fs::path dir =
        fs::path(outputRoot(opts, config.outputDir)) / config.name;
    fs::create_directories(dir);

    std::vector<std::string> trajectoryChecks;
    std::vector<std::string> modelChecks;
    for (const std::string& name : config.checks) {
      if (trajectoryCheckNames().count(name)) {
        trajectoryChecks.push_back(name);
      } else {
        modelChecks.push_back(name);
      }
    }
    if (!trajectoryChecks.empty() && config.initialConditions.empty()) {
      throw InputError("experiment '" + config.name +
                       "' requests per-trajectory checks but has no "
                       "initial conditions");
    }

    RunReport report;
    report.model = model->name();
    report.seed = seed;
    out << "experiment " << config.name << " (model " << model->name()
        << ")\n";

    for (int i = 0; i < static_cast<int>(config.initialConditions.size());
         ++i) {
      const ResolvedIc ic = resolveInitialCondition(
          *model, config.initialConditions[i], i + 1);
      const double energy = hamiltonianEnergy(*model, ic.x0, ic.lambda0);
      const PhaseTrajectory traj = integrateNormalGeodesic(
          *model, ic.x0, ic.lambda0, config.horizon, config.step, true);
      const BaseTrajectory base = projectToBase(*model, traj);

      CurvatureProfile profile;
      if (2.0 * energy > kStationaryEnergy) {
        profile = frenetCurvatures(*model, base);
      } else {
        // Stationary extremal: the projection is a point, both curvatures
        // are taken as zero.
        profile.times = base.times;
        profile.kappa1 = Vec::Zero(static_cast<int>(base.times.size()));
        profile.kappa2 = Vec::Zero(static_cast<int>(base.times.size()));
        profile.kappa1Constant = true;
        profile.kappa2Vanishing = true;
      }

      const std::string suffix = "_ic" + std::to_string(i + 1) + ".csv";
      writeTrajectoryCsv((dir / ("trajectory" + suffix)).string(), traj);
      writeCurvatureCsv((dir / ("curvature" + suffix)).string(), base,
                        profile);

      const double drift = energyDrift(*model, traj);
      for (const std::string& name : trajectoryChecks) {
        report.checks.push_back(trajectoryCheck(name, i + 1, traj, profile,
                                                drift, tolNumeric));
      }
    }

    CheckOptions checkOpts;
    checkOpts.seed = seed;
    checkOpts.tolAlgebraic = tolAlgebraic;
    checkOpts.tolNumeric = tolNumeric;
    for (const std::string& name : modelChecks) {
      report.checks.push_back(runCheck(*model, name, checkOpts));
    }

    int passed = 0;
    for (const CheckReport& check : report.checks) {
      printCheckLine(out, check);
      if (check.pass) {
        ++passed;
      } else {
        allPass = false;
      }
    }
    out << "  " << passed << "/" << report.checks.size()
        << " checks passed, output in " << dir.string() << "\n";
    writeReportJson((dir / "report.json").string(), report);
  }

  return allPass ? 0 : 1;
}

int verifyModel(const std::string& modelName, const RunOptions& opts,
                std::ostream& out) {
  const ModelPtr model = makeModel(modelName);
  CheckOptions checkOpts;
  checkOpts.seed = opts.seed.value_or(kDefaultSeed);
  if (opts.tolAlgebraic) {
    checkOpts.tolAlgebraic = *opts.tolAlgebraic;
  }
  if (opts.tolNumeric) {
    checkOpts.tolNumeric = *opts.tolNumeric;
  }

  RunReport report;
  report.model = model->name();
  report.seed = checkOpts.seed;
  out << "verifying model " << model->name() << "\n";
  bool allPass = true;
  for (const std::string& name : modelCheckNames()) {
    report.checks.push_back(runCheck(*model, name, checkOpts));
    printCheckLine(out, report.checks.back());
    allPass = allPass && report.checks.back().pass;
  }

  namespace fs = std::filesystem;
  const fs::path dir =
      fs::path(outputRoot(opts, "")) / ("verify-" + model->name());
  fs::create_directories(dir);
  writeReportJson((dir / "report.json").string(), report);
  out << (allPass ? "all checks passed" : "some checks failed")
      << ", report in " << dir.string() << "\n";
  return allPass ? 0 : 1;
}

void listModels(std::ostream& out) {
  for (const std::string& name : builtinModelNames()) {
    const ModelPtr model = makeModel(name);
    out << std::left << std::setw(22) << name << " manifold dim "
        << model->manifoldDim() << ", base dim " << model->baseDim() << "\n";
  }
}

void listChecks(std::ostream& out) {
  for (const auto& [name, description] : allCheckDescriptions()) {
    out << std::left << std::setw(28) << name << " " << description << "\n";
  }
}

}  // namespace subriem
