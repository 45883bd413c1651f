// End-to-end acceptance suite for the library's headline guarantees.
// Each criterion prints one [PASS]/[FAIL] line with the worst numbers
// it observed, and the process exits nonzero when any criterion fails.
// The report-determinism criterion drives the command-line binary,
// whose path the build system injects via SUBRIEM_CLI_PATH.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core/criteria.hpp"
#include "core/flows.hpp"
#include "core/frenet.hpp"
#include "core/geometry.hpp"
#include "core/metric_extension.hpp"
#include "core/models.hpp"
#include "core/rng.hpp"

namespace {

using namespace subriem;
namespace fs = std::filesystem;

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

double secondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

std::vector<ModelPtr> builtinModels() {
  return {heisenberg(), productHeisenberg(), quaternionicHType(), hopf()};
}

// Covector with positive horizontal energy at x, so the geodesic moves.
Vec movingCovector(const SubmersionModel& model, const Vec& x, Rng& rng) {
  while (true) {
    const Vec lambda = rng.normalVec(model.chartDim());
    if (2.0 * hamiltonianEnergy(model, x, lambda) > 1e-12) {
      return lambda;
    }
  }
}

CurvatureProfile projectionProfile(const SubmersionModel& model,
                                   const PhaseTrajectory& traj) {
  return frenetCurvatures(model, projectToBase(model, traj));
}

// Closed-form Heisenberg geodesic from the origin with lambda0 =
// (cos phi, sin phi, c); see the flows test suite for the derivation.
Vec heisenbergExact(double phi, double c, double t) {
  Vec out(3);
  const double cosp = std::cos(phi);
  const double sinp = std::sin(phi);
  const double x =
      (std::sin(c * t) * cosp - (1.0 - std::cos(c * t)) * sinp) / c;
  const double y =
      (std::sin(c * t) * sinp + (1.0 - std::cos(c * t)) * cosp) / c;
  out << x, y, (c * t - std::sin(c * t)) / (2.0 * c * c);
  return out;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return {};
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string withoutTimestampLines(const std::string& text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find("\"timestamp\"") == std::string::npos) {
      out << line << '\n';
    }
  }
  return out.str();
}

fs::path freshDir(const std::string& tag) {
  const fs::path dir =
      fs::temp_directory_path() /
      ("subriem-acceptance-" + std::to_string(::getpid()) + "-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// 1. Projections of Heisenberg geodesics from the origin with
// lambda0 = (cos phi, sin phi, c) are circles of geodesic curvature |c|,
// matching the closed-form Hamilton solution.
Outcome heisenbergCircleLaw() {
  const auto start = std::chrono::steady_clock::now();
  const ModelPtr model = heisenberg();
  Rng rng(kDefaultSeed);
  double worstSpread = 0.0;
  double worstLevel = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    double charge = 0.0;
    do {
      charge = rng.uniform(-2.0, 2.0);
    } while (charge == 0.0);
    Vec lambda0(3);
    lambda0 << std::cos(phi), std::sin(phi), charge;
    const PhaseTrajectory traj =
        integrateNormalGeodesic(*model, Vec::Zero(3), lambda0, 5.0, 1e-3);
    const CurvatureProfile profile = projectionProfile(*model, traj);
    worstSpread = std::max(worstSpread, profile.kappa1RelStd);
    worstLevel =
        std::max(worstLevel, std::abs(profile.kappa1Mean - std::abs(charge)));
  }
  const double elapsed = secondsSince(start);
  Outcome out;
  out.pass = worstSpread < 1e-6 && worstLevel < 1e-6 && elapsed < 10.0;
  out.detail = fmt("rel spread %.1e, level error %.1e, %.1f s", worstSpread,
                   worstLevel, elapsed);
  return out;
}

// 2. Projections of sphere-model geodesics are circles: constant kappa1
// and vanishing kappa2 on every sampled initial condition.
Outcome hopfParallelCircles() {
  const auto start = std::chrono::steady_clock::now();
  const ModelPtr model = hopf();
  Rng rng(kDefaultSeed);
  bool allConstant = true;
  double worstSpread = 0.0;
  double worstKappa2 = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const Vec x0 = model->samplePoint(rng);
    const Vec lambda0 = movingCovector(*model, x0, rng);
    const PhaseTrajectory traj =
        integrateNormalGeodesic(*model, x0, lambda0, 2.0, 1e-3);
    const CurvatureProfile profile = projectionProfile(*model, traj);
    allConstant =
        allConstant && classifyCurve(profile, 1e-5, 1e-5).kappa1Constant;
    worstSpread = std::max(worstSpread, profile.kappa1RelStd);
    worstKappa2 = std::max(worstKappa2, profile.kappa2Max);
  }
  const double elapsed = secondsSince(start);
  Outcome out;
  out.pass = allConstant && worstKappa2 < 1e-5 && elapsed < 10.0;
  out.detail = fmt("rel spread %.1e, max kappa2 %.1e, %.1f s", worstSpread,
                   worstKappa2, elapsed);
  return out;
}

// 3. The sampled-curve Frenet route and the extremal-covector formula
// report the same kappa1 on every built-in model.
Outcome routeAgreement() {
  CheckOptions opts;
  opts.samples = 50;
  bool pass = true;
  double worstGap = 0.0;
  for (const ModelPtr& model : builtinModels()) {
    const CheckReport report = runCheck(*model, "route-agreement", opts);
    pass = pass && report.pass;
    worstGap = std::max(worstGap, report.maxResidual);
  }
  return {pass, fmt("max kappa1 gap %.1e over 4 models x 50 probes", worstGap)};
}

// 4. The algebraic constancy test (drift of |J_alpha etadot| under
// annihilator transport) and the sampled-curve classification agree
// probe by probe on every built-in model.
Outcome constancyEquivalence() {
  int disagreements = 0;
  int constantCount = 0;
  for (const ModelPtr& model : builtinModels()) {
    Rng rng(kDefaultSeed);
    const int n = model->baseDim();
    const int vd = model->verticalDim();
    for (int trial = 0; trial < 50; ++trial) {
      const Vec x = model->samplePoint(rng);
      const Vec alpha = rng.unitVec(vd);
      const Vec v = rng.unitVec(n);
      const bool algebraic =
          constantJLengthResidual(*model, x, alpha, v, 1.0, 1e-3) < 1e-6;
      const Vec lambda0 = horizontalCovector(*model, x, v) +
                          annihilatorToChart(*model, x, alpha);
      const PhaseTrajectory traj =
          integrateNormalGeodesic(*model, x, lambda0, 1.0, 1e-3);
      const bool observed =
          classifyCurve(projectionProfile(*model, traj), 1e-5, 1e-5)
              .kappa1Constant;
      if (algebraic != observed) {
        ++disagreements;
      }
      if (observed) {
        ++constantCount;
      }
    }
  }
  Outcome out;
  out.pass = disagreements == 0;
  out.detail = fmt("%d/200 matched probes disagree (%d classified constant)",
                   disagreements, constantCount);
  return out;
}

// 5. kappa2 separates the models: the quaternionic model passes the J
// squared identity and all its projections have vanishing kappa2, while
// the product model breaks the identity at alpha = (1, 2) with a mixed
// velocity and the same data drives a projection with kappa2 of order
// one.
Outcome kappa2Discriminator() {
  const ModelPtr quaternionic = quaternionicHType();
  CheckOptions opts;
  opts.samples = 50;
  const CheckReport jsq = runCheck(*quaternionic, "j-squared", opts);

  Rng rng(kDefaultSeed);
  double quatKappa2 = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x0 = quaternionic->samplePoint(rng);
    const Vec lambda0 = movingCovector(*quaternionic, x0, rng);
    const PhaseTrajectory traj =
        integrateNormalGeodesic(*quaternionic, x0, lambda0, 1.0, 1e-3);
    quatKappa2 =
        std::max(quatKappa2, projectionProfile(*quaternionic, traj).kappa2Max);
  }

  const ModelPtr product = productHeisenberg();
  const Vec x0 = Vec::Zero(6);
  Vec alpha(2);
  alpha << 1.0, 2.0;
  Vec v(4);
  v << 1.0, 0.0, 1.0, 0.0;
  v /= std::sqrt(2.0);
  const double residual = jSquaredResidual(*product, x0, alpha, v);
  const Vec lambda0 = horizontalCovector(*product, x0, v) +
                      annihilatorToChart(*product, x0, alpha);
  const PhaseTrajectory traj =
      integrateNormalGeodesic(*product, x0, lambda0, 2.0, 1e-3);
  const double productKappa2 = projectionProfile(*product, traj).kappa2Max;

  Outcome out;
  out.pass =
      jsq.pass && quatKappa2 < 1e-5 && residual > 0.3 && productKappa2 > 1e-3;
  out.detail = fmt("htype kappa2 %.1e; product residual %.2f, kappa2 %.2f",
                   quatKappa2, residual, productKappa2);
  return out;
}

// 6. The J squared and polarization identities hold on the quaternionic
// model, and on the Heisenberg group the extended squared norm of the
// annihilator covector is 1 exactly: every horizontal pairing in the
// factored quadratic form cancels in floating point, so the value is
// compared for equality rather than against a tolerance.
Outcome htypeIdentities() {
  const ModelPtr quaternionic = quaternionicHType();
  Rng rng(kDefaultSeed);
  double worstResidual = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = quaternionic->samplePoint(rng);
    const Vec alpha = rng.normalVec(quaternionic->verticalDim());
    const Vec beta = rng.normalVec(quaternionic->verticalDim());
    const std::pair<double, double> residuals =
        hTypeResiduals(*quaternionic, x, alpha, beta);
    worstResidual =
        std::max(worstResidual, std::max(residuals.first, residuals.second));
  }

  const ModelPtr heis = heisenberg();
  Rng pointRng(kDefaultSeed);
  Vec one(1);
  one << 1.0;
  const int n = heis->baseDim();
  const double weight = canonicalWeight(n);
  int exactCount = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec x = heis->samplePoint(pointRng);
    const Vec alpha = annihilatorToChart(*heis, x, one);
    double quad = 0.0;
    for (int i = 0; i < n; ++i) {
      const double pairing = alpha.dot(heis->horizontalField(x, i));
      quad += pairing * pairing;
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Vec curvature =
            curvatureR(*heis, x, heis->horizontalField(x, i),
                       heis->horizontalField(x, j));
        const double pairing = alpha.dot(curvature);
        quad += weight * pairing * pairing;
      }
    }
    if (quad == 1.0) {
      ++exactCount;
    }
  }

  Outcome out;
  out.pass = worstResidual < 1e-10 && exactCount == 100;
  out.detail = fmt("htype residual %.1e, unit norm exact at %d/100 points",
                   worstResidual, exactCount);
  return out;
}

// 7. The canonical extension is positive-definite on the frame span at
// random points of every built-in model, and projections of extended
// geodesics coincide with the sub-Riemannian projections over matched
// arc length.
Outcome extensionSoundness() {
  CheckOptions opts;
  opts.samples = 100;
  bool pass = true;
  double smallestEigenvalue = 1e300;
  for (const ModelPtr& model : builtinModels()) {
    const CheckReport report =
        runCheck(*model, "nondegenerate-extension", opts);
    pass = pass && report.pass;
    smallestEigenvalue = std::min(smallestEigenvalue, -report.maxResidual);
  }

  double worstDeviation = 0.0;
  for (const ModelPtr& model : {heisenberg(), hopf()}) {
    const CheckReport report =
        runCheck(*model, "projection-coincidence", CheckOptions{});
    pass = pass && report.pass;
    worstDeviation = std::max(worstDeviation, report.maxResidual);
  }
  return {pass, fmt("min eigenvalue %.2e, max projection gap %.1e",
                    smallestEigenvalue, worstDeviation)};
}

// 8. The horizontal frame together with its curvatures spans the whole
// tangent space on every built-in model, and the zero-constants model
// is rejected with a unit kernel witness.
Outcome step2Decomposition() {
  CheckOptions opts;
  opts.samples = 100;
  bool builtinsPass = true;
  for (const ModelPtr& model : builtinModels()) {
    builtinsPass =
        builtinsPass && runCheck(*model, "step2-decomposition", opts).pass;
  }

  StructureConstants constants;
  constants.n = 2;
  constants.verticalDim = 1;
  constants.c = zeroTensor3(1, 2, 2);
  const ModelPtr degenerate = step2Carnot(constants, "degenerate", true);
  Vec witness;
  const int rank =
      step2DecompositionRank(*degenerate, Vec::Zero(3), &witness);
  CheckOptions degenerateOpts;
  degenerateOpts.samples = 10;
  const CheckReport report =
      runCheck(*degenerate, "step2-decomposition", degenerateOpts);
  const bool witnessOk =
      witness.size() == 3 && std::abs(witness.norm() - 1.0) < 1e-12;

  Outcome out;
  out.pass = builtinsPass && rank == 2 && witnessOk && !report.pass;
  out.detail = fmt("built-ins full rank; degenerate rank %d, witness norm %s",
                   rank, witnessOk ? "1" : "bad");
  return out;
}

// 9. Energy is conserved to 1e-9 over T = 10 by the normal and the
// extended geodesic flows on every built-in model, and the integrator
// converges at fourth order under step halving, measured against the
// closed-form Heisenberg geodesic and against a fine-step reference for
// the extended flow on the sphere model.
Outcome numericsHygiene() {
  double worstDrift = 0.0;
  for (const ModelPtr& model : builtinModels()) {
    Rng rng(kDefaultSeed);
    const Vec x0 = model->samplePoint(rng);
    const Vec lambda0 = movingCovector(*model, x0, rng);
    const PhaseTrajectory normal =
        integrateNormalGeodesic(*model, x0, lambda0, 10.0, 1e-3);
    worstDrift = std::max(worstDrift, energyDrift(*model, normal));

    const PhaseTrajectory extended =
        integrateExtendedGeodesic(*model, x0, lambda0, 10.0, 1e-3, true);
    const double reference =
        extendedEnergy(*model, Vec(extended.x.row(0).transpose()),
                       Vec(extended.lambda.row(0).transpose()));
    double extendedDrift = 0.0;
    for (int s = 0; s < static_cast<int>(extended.times.size()); s += 25) {
      const double energy =
          extendedEnergy(*model, Vec(extended.x.row(s).transpose()),
                         Vec(extended.lambda.row(s).transpose()));
      extendedDrift = std::max(extendedDrift, std::abs(energy - reference));
    }
    worstDrift = std::max(worstDrift, extendedDrift);
  }

  const ModelPtr heis = heisenberg();
  const double phi = 0.7;
  const double charge = 1.3;
  Vec lambda0(3);
  lambda0 << std::cos(phi), std::sin(phi), charge;
  const auto normalEndpointError = [&](double h) {
    const PhaseTrajectory traj =
        integrateNormalGeodesic(*heis, Vec::Zero(3), lambda0, 2.0, h, false);
    const int last = static_cast<int>(traj.times.size()) - 1;
    const Vec exact = heisenbergExact(phi, charge, traj.times(last));
    return (traj.x.row(last).transpose() - exact).norm();
  };
  const double normalFactor =
      normalEndpointError(0.02) / normalEndpointError(0.01);

  const ModelPtr sphere = hopf();
  Vec q0(4);
  q0 << 1.0, 0.0, 0.0, 0.0;
  Vec u(2);
  u << 1.0, 0.0;
  Vec a(1);
  a << 0.5;
  const Vec mu0 = horizontalCovector(*sphere, q0, u) +
                  annihilatorToChart(*sphere, q0, a);
  const auto extendedEndpoint = [&](double h) {
    const PhaseTrajectory traj =
        integrateExtendedGeodesic(*sphere, q0, mu0, 2.0, h, true);
    const int last = static_cast<int>(traj.times.size()) - 1;
    return Vec(traj.x.row(last).transpose());
  };
  const Vec fine = extendedEndpoint(0.00125);
  const double extendedFactor = (extendedEndpoint(0.02) - fine).norm() /
                                (extendedEndpoint(0.01) - fine).norm();

  const auto fourthOrder = [](double factor) {
    return factor >= 8.0 && factor <= 32.0;
  };
  Outcome out;
  out.pass = worstDrift < 1e-9 && fourthOrder(normalFactor) &&
             fourthOrder(extendedFactor);
  out.detail = fmt("drift %.1e, halving factors %.1f and %.1f", worstDrift,
                   normalFactor, extendedFactor);
  return out;
}

// 10. Two verify runs of the command-line binary with the same seed
// write byte-identical reports once the timestamp line is dropped.
Outcome reportDeterminism() {
  const std::string cli = SUBRIEM_CLI_PATH;
  const fs::path dirA = freshDir("determinism-a");
  const fs::path dirB = freshDir("determinism-b");
  const std::string prefix = "\"" + cli + "\" verify heisenberg --seed 7 --out \"";
  const int statusA =
      std::system((prefix + dirA.string() + "\" > /dev/null 2>&1").c_str());
  const int statusB =
      std::system((prefix + dirB.string() + "\" > /dev/null 2>&1").c_str());
  const std::string reportA =
      withoutTimestampLines(slurp(dirA / "verify-heisenberg" / "report.json"));
  const std::string reportB =
      withoutTimestampLines(slurp(dirB / "verify-heisenberg" / "report.json"));
  Outcome out;
  out.pass = statusA == 0 && statusB == 0 && !reportA.empty() &&
             reportA == reportB;
  out.detail = fmt("%zu report bytes compared", reportA.size());
  fs::remove_all(dirA);
  fs::remove_all(dirB);
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"heisenberg-circle-law", heisenbergCircleLaw},
      {"hopf-parallel-circles", hopfParallelCircles},
      {"route-agreement", routeAgreement},
      {"constancy-equivalence", constancyEquivalence},
      {"kappa2-discriminator", kappa2Discriminator},
      {"htype-identities", htypeIdentities},
      {"extension-soundness", extensionSoundness},
      {"step2-decomposition", step2Decomposition},
      {"numerics-hygiene", numericsHygiene},
      {"report-determinism", reportDeterminism},
  };
  int failures = 0;
  for (const Criterion& criterion : criteria) {
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = fmt("exception: %s", e.what());
    }
    if (!outcome.pass) {
      ++failures;
    }
    std::printf("[%s] %-24s %s\n", outcome.pass ? "PASS" : "FAIL",
                criterion.name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  if (failures == 0) {
    std::printf("acceptance: 10/10 criteria passed\n");
  } else {
    std::printf("acceptance: %d of 10 criteria failed\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
