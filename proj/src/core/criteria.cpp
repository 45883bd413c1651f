// Check residuals and the named-check probe driver.
#include "core/criteria.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "core/errors.hpp"
#include "core/flows.hpp"
#include "core/frenet.hpp"
#include "core/geometry.hpp"
#include "core/metric_extension.hpp"
#include "core/models.hpp"
#include "core/rng.hpp"

namespace subriem {

namespace {

constexpr int kWitnessKeep = 5;

double operatorNorm(const Mat& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

Vec unitComponents(const Vec& components, const char* what) {
  const double norm = components.norm();
  if (norm < 1e-12) {
    throw InputError(std::string(what) + " has near-zero norm");
  }
  return components / norm;
}

Vec frameCombination(const SubmersionModel& model, const Vec& x,
                     const Vec& components) {
  Vec out = Vec::Zero(model.chartDim());
  for (int i = 0; i < model.baseDim(); ++i) {
    out += components(i) * model.horizontalField(x, i);
  }
  return out;
}

void insertWitness(std::vector<CheckWitness>& list, CheckWitness witness) {
  list.push_back(std::move(witness));
  std::stable_sort(list.begin(), list.end(),
                   [](const CheckWitness& a, const CheckWitness& b) {
                     return a.residual > b.residual;
                   });
  if (static_cast<int>(list.size()) > kWitnessKeep) {
    list.resize(kWitnessKeep);
  }
}

}  // namespace

double constantJLengthResidual(const SubmersionModel& model, const Vec& x0,
                               const Vec& alphaCoeffs, const Vec& vComponents,
                               double T, double h) {
  model.validatePoint(x0);
  const Vec vn = unitComponents(vComponents, "velocity components");
  const Vec w0 =
      model.projectionDifferential(x0) * frameCombination(model, x0, vn);
  const BaseTrajectory eta =
      riemannGeodesicBase(model, model.projectPoint(x0), w0, T, h);
  const PathOnM lift = horizontalLift(model, eta, x0);
  const Mat coeffs = annihilatorTransport(model, lift, alphaCoeffs);

  double reference = 0.0;
  double residual = 0.0;
  for (int s = 0; s < static_cast<int>(lift.times.size()); ++s) {
    const Vec x = lift.x.row(s).transpose();
    const Mat j = jOperator(model, x, Vec(coeffs.row(s).transpose()));
    const Vec wc =
        baseComponentsInFrame(model, x, Vec(eta.ydot.row(s).transpose()));
    const double value = applyJ(j, wc).norm();
    if (s == 0) {
      reference = value;
    } else {
      residual = std::max(residual, std::abs(value - reference));
    }
  }
  return residual;
}

double parallelJFieldResidual(const SubmersionModel& model, const Vec& x0,
                              const Vec& alphaCoeffs, const Vec& vComponents,
                              double T, double h) {
  model.validatePoint(x0);
  const Vec vn = unitComponents(vComponents, "velocity components");
  const Vec w0 =
      model.projectionDifferential(x0) * frameCombination(model, x0, vn);
  const BaseTrajectory eta =
      riemannGeodesicBase(model, model.projectPoint(x0), w0, T, h);
  const PathOnM lift = horizontalLift(model, eta, x0);
  const Mat coeffs = annihilatorTransport(model, lift, alphaCoeffs);

  const auto jFieldAt = [&](int s) {
    const Vec x = lift.x.row(s).transpose();
    const Mat j = jOperator(model, x, Vec(coeffs.row(s).transpose()));
    const Vec wc =
        baseComponentsInFrame(model, x, Vec(eta.ydot.row(s).transpose()));
    return Vec(model.projectionDifferential(x) *
               frameCombination(model, x, applyJ(j, wc)));
  };

  const Mat transported = parallelTransportBase(model, eta, jFieldAt(0));
  double residual = 0.0;
  for (int s = 0; s < static_cast<int>(lift.times.size()); ++s) {
    const Vec diff = jFieldAt(s) - transported.row(s).transpose();
    const Mat g = model.baseMetric(Vec(eta.y.row(s).transpose()));
    residual = std::max(residual, std::sqrt(diff.dot(g * diff)));
  }
  return residual;
}

double jSquaredResidual(const SubmersionModel& model, const Vec& x,
                        const Vec& alphaCoeffs, const Vec& vComponents) {
  const Mat j = jOperator(model, x, alphaCoeffs);
  const Vec vn = unitComponents(vComponents, "direction components");
  const Vec jv = applyJ(j, vn);
  return (applyJ(j, jv) + jv.squaredNorm() * vn).norm();
}

double jOrthogonalityResidual(const SubmersionModel& model, const Vec& x,
                              const Vec& alphaCoeffs, const Vec& vComponents,
                              const Vec& wComponents) {
  const Mat j = jOperator(model, x, alphaCoeffs);
  const Vec vn = unitComponents(vComponents, "direction components");
  const Vec rho = applyJ(j, vn);
  Vec w = wComponents;
  w -= w.dot(vn) * vn;
  if (rho.norm() > 1e-12) {
    const Vec rhat = rho.normalized();
    w -= w.dot(rhat) * rhat;
  }
  if (w.norm() < 1e-9) {
    return 0.0;  // no admissible direction left; the identity is vacuous
  }
  return std::abs(applyJ(j, vn).dot(applyJ(j, Vec(w.normalized()))));
}

double kappaDerivativeResidual(const SubmersionModel& model, const Vec& x,
                               const Vec& alphaCoeffs, const Vec& vComponents) {
  const Vec alphaChart = annihilatorToChart(model, x, alphaCoeffs);
  const Vec vn = unitComponents(vComponents, "direction components");
  const Vec vChart = frameCombination(model, x, vn);
  double sum = 0.0;
  for (int i = 0; i < model.baseDim(); ++i) {
    const Vec field = model.horizontalField(x, i);
    const double rho = alphaChart.dot(curvatureR(model, x, vChart, field));
    const double sigma =
        alphaChart.dot(covDerivR(model, x, vChart, vChart, field));
    sum += rho * sigma;
  }
  return std::abs(sum);
}

std::pair<double, double> hTypeResiduals(const SubmersionModel& model,
                                         const Vec& x, const Vec& alphaCoeffs,
                                         const Vec& betaCoeffs) {
  const int n = model.baseDim();
  const Mat identity = Mat::Identity(n, n);
  const Mat ma = jOperator(model, x, alphaCoeffs).transpose();
  const Mat mb = jOperator(model, x, betaCoeffs).transpose();
  const Vec alphaChart = annihilatorToChart(model, x, alphaCoeffs);
  const Vec betaChart = annihilatorToChart(model, x, betaCoeffs);
  const Mat cometric = extendedCometric(model, x);
  const double alphaSq = alphaChart.dot(cometric * alphaChart);
  const double cross = alphaChart.dot(cometric * betaChart);
  const double square = operatorNorm(ma * ma + alphaSq * identity);
  const double polarized =
      operatorNorm(ma * mb + mb * ma + 2.0 * cross * identity);
  return {square, polarized};
}

double normalizationResidual(const SubmersionModel& model, const Vec& x,
                             const Vec& alphaCoeffs) {
  const Vec alphaChart = annihilatorToChart(model, x, alphaCoeffs);
  const double lhs = alphaChart.dot(extendedCometric(model, x) * alphaChart);
  const Mat j = jOperator(model, x, alphaCoeffs);
  const double rhs = j.squaredNorm() / model.baseDim();
  return std::abs(lhs - rhs);
}

double coframeDiagonalResidual(const SubmersionModel& model, const Vec& x) {
  const int n = model.baseDim();
  const int vd = model.verticalDim();
  Tensor3 a = zeroTensor3(vd, n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vec coeffs =
          verticalCoefficients(model, x, model.frameBracket(x, i, j));
      for (int k = 0; k < vd; ++k) {
        a[k](i, j) = coeffs(k);
        a[k](j, i) = -coeffs(k);
      }
    }
  }
  double residual = 0.0;
  for (int k = 0; k < vd; ++k) {
    const Mat square = -(a[k] * a[k]);
    double offDiagonal = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) {
          offDiagonal += std::abs(square(i, j));
        }
      }
    }
    Eigen::SelfAdjointEigenSolver<Mat> eigen(
        0.5 * (square + square.transpose()));
    double negative = 0.0;
    for (int i = 0; i < n; ++i) {
      negative += std::max(0.0, -eigen.eigenvalues()(i));
    }
    residual = std::max(residual, offDiagonal + negative);
  }
  return residual;
}

double curvatureSquareResidual(const CurvatureOperator& op, const Mat& gN,
                               const Vec& u, const Vec& v, const Vec& w) {
  const auto gNormalize = [&gN](const Vec& vec, const char* what) {
    const double norm = std::sqrt(vec.dot(gN * vec));
    if (norm < 1e-12) {
      throw InputError(std::string(what) + " has near-zero norm");
    }
    return Vec(vec / norm);
  };
  const Vec un = gNormalize(u, "first direction");
  const Vec vn = gNormalize(v, "second direction");
  const Vec wn = gNormalize(w, "third direction");
  const Vec rw = op(un, vn, wn);
  const Vec defect = op(un, vn, rw) + rw.dot(gN * rw) * wn;
  return std::sqrt(defect.dot(gN * defect));
}

double parallelCurvatureResidual(const SubmersionModel& model, const Vec& x,
                                 const Vec& v, const Vec& a, const Vec& b) {
  return covDerivR(model, x, v, a, b).norm();
}

int step2DecompositionRank(const SubmersionModel& model, const Vec& x,
                           Vec* kernelWitness) {
  const int n = model.baseDim();
  const int m = model.manifoldDim();
  const int d = model.chartDim();
  const int pairs = n * (n - 1) / 2;
  Mat span(d, n + pairs);
  for (int i = 0; i < n; ++i) {
    span.col(i) = model.horizontalField(x, i);
  }
  int col = n;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++col) {
      const Vec coeffs =
          verticalCoefficients(model, x, model.frameBracket(x, i, j));
      Vec field = Vec::Zero(d);
      for (int k = 0; k < m - n; ++k) {
        field += coeffs(k) * model.verticalField(x, k);
      }
      span.col(col) = field;
    }
  }
  Eigen::JacobiSVD<Mat> svd(span, Eigen::ComputeFullU);
  const double scale = std::max(1.0, svd.singularValues().maxCoeff());
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()(i) > 1e-8 * scale) {
      ++rank;
    }
  }
  if (kernelWitness != nullptr) {
    *kernelWitness = rank < m ? Vec(svd.matrixU().col(rank)) : Vec();
  }
  return rank;
}

double nondegeneracyMinEigenvalue(const SubmersionModel& model, const Vec& x) {
  const Mat coframe = dualCoframe(model, x);
  const Mat basis = coframe.topRows(model.manifoldDim());
  const Mat restricted =
      basis * extendedCometric(model, x) * basis.transpose();
  Eigen::SelfAdjointEigenSolver<Mat> eigen(
      0.5 * (restricted + restricted.transpose()));
  return eigen.eigenvalues().minCoeff();
}

namespace {

struct CheckContext {
  const SubmersionModel& model;
  const CheckOptions& opts;
  Rng rng;
  CheckReport report;

  CheckContext(const SubmersionModel& m, const CheckOptions& o,
               const std::string& name)
      : model(m), opts(o), rng(o.seed) {
    report.name = name;
  }

  int sampleCount(int fallback) const {
    return opts.samples > 0 ? opts.samples : fallback;
  }

  void record(double residual, CheckWitness witness) {
    report.maxResidual = std::max(report.maxResidual, residual);
    witness.residual = residual;
    insertWitness(report.witnesses, std::move(witness));
  }

  CheckReport finish(double tolerance) {
    report.tolerance = tolerance;
    report.pass = report.maxResidual < tolerance;
    return report;
  }
};

CheckReport runFrameInvariants(CheckContext& ctx) {
  const int samples = ctx.sampleCount(100);
  const ModelInvariantResult suite =
      runModelInvariantSuite(ctx.model, samples, ctx.opts.seed);
  ctx.report.samples = samples;
  ctx.report.maxResidual =
      std::max({suite.orthonormalityResidual, suite.verticalityResidual,
                suite.independenceResidual, suite.coframeResidual});
  return ctx.finish(ctx.opts.tolAlgebraic);
}

CheckReport runBracketConsistency(CheckContext& ctx) {
  const int samples = ctx.sampleCount(100);
  const ModelInvariantResult suite =
      runModelInvariantSuite(ctx.model, samples, ctx.opts.seed);
  ctx.report.samples = samples;
  ctx.report.maxResidual = suite.bracketResidual;
  return ctx.finish(1e-7);
}

CheckReport runPointProbeCheck(
    CheckContext& ctx, int fallbackSamples, double tolerance,
    const std::function<double(CheckContext&, CheckWitness&)>& probe) {
  const int samples = ctx.sampleCount(fallbackSamples);
  ctx.report.samples = samples;
  for (int s = 0; s < samples; ++s) {
    CheckWitness witness;
    const double residual = probe(ctx, witness);
    ctx.record(residual, std::move(witness));
  }
  return ctx.finish(tolerance);
}

}  // namespace

CheckReport runCheck(const SubmersionModel& model, const std::string& name,
                     const CheckOptions& opts) {
  CheckContext ctx(model, opts, name);
  const int n = model.baseDim();
  const int vd = model.verticalDim();

  if (name == "frame-invariants") {
    return runFrameInvariants(ctx);
  }
  if (name == "bracket-consistency") {
    return runBracketConsistency(ctx);
  }
  if (name == "j-squared") {
    return runPointProbeCheck(
        ctx, 100, opts.tolAlgebraic, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          w.alpha = c.rng.unitVec(vd);
          w.v = c.rng.unitVec(n);
          return jSquaredResidual(c.model, w.x, w.alpha, w.v);
        });
  }
  if (name == "j-orthogonality") {
    return runPointProbeCheck(
        ctx, 100, opts.tolAlgebraic, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          w.alpha = c.rng.unitVec(vd);
          w.v = c.rng.unitVec(n);
          w.w = c.rng.unitVec(n);
          return jOrthogonalityResidual(c.model, w.x, w.alpha, w.v, w.w);
        });
  }
  if (name == "htype-identity") {
    return runPointProbeCheck(
        ctx, 100, opts.tolAlgebraic, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          w.alpha = c.rng.unitVec(vd);
          w.w = c.rng.unitVec(vd);  // beta coefficients
          const auto [square, polarized] =
              hTypeResiduals(c.model, w.x, w.alpha, w.w);
          return std::max(square, polarized);
        });
  }
  if (name == "normalization-identity") {
    return runPointProbeCheck(
        ctx, 100, opts.tolAlgebraic, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          w.alpha = c.rng.unitVec(vd);
          return normalizationResidual(c.model, w.x, w.alpha);
        });
  }
  if (name == "coframe-curvature-diagonal") {
    return runPointProbeCheck(
        ctx, 100, opts.tolAlgebraic, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          return coframeDiagonalResidual(c.model, w.x);
        });
  }
  if (name == "curvature-square-identity") {
    const CurvatureOperator op = model.baseCurvatureOp();
    return runPointProbeCheck(
        ctx, 100, opts.tolAlgebraic, [&, op](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          const Mat dpi = c.model.projectionDifferential(w.x);
          const Mat g = c.model.baseMetric(c.model.projectPoint(w.x));
          const Vec u = dpi * frameCombination(c.model, w.x, c.rng.unitVec(n));
          const Vec v = dpi * frameCombination(c.model, w.x, c.rng.unitVec(n));
          const Vec z = dpi * frameCombination(c.model, w.x, c.rng.unitVec(n));
          return curvatureSquareResidual(op, g, u, v, z);
        });
  }
  if (name == "kappa1-derivative") {
    return runPointProbeCheck(
        ctx, 50, opts.tolNumeric, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          w.alpha = c.rng.unitVec(vd);
          w.v = c.rng.unitVec(n);
          return kappaDerivativeResidual(c.model, w.x, w.alpha, w.v);
        });
  }
  if (name == "parallel-curvature") {
    return runPointProbeCheck(
        ctx, 50, opts.tolNumeric, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          w.v = c.rng.unitVec(n);
          const Vec a = c.rng.unitVec(n);
          const Vec b = c.rng.unitVec(n);
          w.w = a;
          return parallelCurvatureResidual(
              c.model, w.x, frameCombination(c.model, w.x, w.v),
              frameCombination(c.model, w.x, a),
              frameCombination(c.model, w.x, b));
        });
  }
  if (name == "constant-j-length") {
    return runPointProbeCheck(
        ctx, 10, opts.tolNumeric, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          w.alpha = c.rng.unitVec(vd);
          w.v = c.rng.unitVec(n);
          return constantJLengthResidual(c.model, w.x, w.alpha, w.v,
                                         c.opts.horizon, c.opts.step);
        });
  }
  if (name == "parallel-j-field") {
    return runPointProbeCheck(
        ctx, 10, opts.tolNumeric, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          w.alpha = c.rng.unitVec(vd);
          w.v = c.rng.unitVec(n);
          return parallelJFieldResidual(c.model, w.x, w.alpha, w.v,
                                        c.opts.horizon, c.opts.step);
        });
  }
  if (name == "route-agreement") {
    return runPointProbeCheck(
        ctx, 10, 1e-6, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          const Vec lambda = c.rng.normalVec(c.model.chartDim());
          w.w = lambda;
          if (2.0 * hamiltonianEnergy(c.model, w.x, lambda) <= 1e-14) {
            return 0.0;
          }
          const PhaseTrajectory traj = integrateNormalGeodesic(
              c.model, w.x, lambda, c.opts.horizon, c.opts.step, true);
          const CurvatureProfile fromCurve =
              frenetCurvatures(c.model, projectToBase(c.model, traj));
          const CurvatureProfile fromCovector =
              kappaViaExtremal(c.model, traj, false);
          return (fromCurve.kappa1 - fromCovector.kappa1)
              .cwiseAbs()
              .maxCoeff();
        });
  }
  if (name == "projection-coincidence") {
    return runPointProbeCheck(
        ctx, 5, 1e-4, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          const Vec lambda = c.rng.normalVec(c.model.chartDim());
          w.w = lambda;
          if (2.0 * hamiltonianEnergy(c.model, w.x, lambda) <= 1e-14) {
            return 0.0;
          }
          const ProjectionComparison cmp = compareProjections(
              c.model, w.x, lambda, c.opts.horizon, c.opts.step);
          return cmp.maxDeviation;
        });
  }
  if (name == "step2-decomposition") {
    return runPointProbeCheck(
        ctx, 100, 0.5, [&](CheckContext& c, CheckWitness& w) {
          w.x = c.model.samplePoint(c.rng);
          Vec kernel;
          const int rank = step2DecompositionRank(c.model, w.x, &kernel);
          w.w = kernel;
          return static_cast<double>(c.model.manifoldDim() - rank);
        });
  }
  if (name == "nondegenerate-extension") {
    // The residual is the negated smallest eigenvalue of the restricted
    // extended cometric, so pass means every eigenvalue clears 1e-10.
    const int samples = ctx.sampleCount(100);
    ctx.report.samples = samples;
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
      CheckWitness witness;
      witness.x = model.samplePoint(ctx.rng);
      const double negEigen =
          -nondegeneracyMinEigenvalue(model, witness.x);
      worst = std::max(worst, negEigen);
      witness.residual = negEigen;
      insertWitness(ctx.report.witnesses, std::move(witness));
    }
    ctx.report.maxResidual = worst;
    return ctx.finish(-1e-10);
  }

  throw InputError("unknown check '" + name + "'");
}

std::vector<std::string> modelCheckNames() {
  return {
      "bracket-consistency",
      "coframe-curvature-diagonal",
      "constant-j-length",
      "curvature-square-identity",
      "frame-invariants",
      "htype-identity",
      "j-orthogonality",
      "j-squared",
      "kappa1-derivative",
      "nondegenerate-extension",
      "normalization-identity",
      "parallel-curvature",
      "parallel-j-field",
      "projection-coincidence",
      "route-agreement",
      "step2-decomposition",
  };
}

std::vector<std::pair<std::string, std::string>> allCheckDescriptions() {
  return {
      {"bracket-consistency",
       "analytic frame brackets match finite differences (tolerance 1e-7)"},
      {"coframe-curvature-diagonal",
       "-A_k^2 is diagonal with nonnegative entries for the coframe "
       "curvature matrices A_k"},
      {"constant-j-length",
       "|J_alpha(etadot)| stays constant along base geodesics under "
       "annihilator transport"},
      {"constant-kappa1",
       "per-trajectory: relative spread of kappa1 along the projection"},
      {"curvature-square-identity",
       "base curvature satisfies R(u,v)^2 w = -|R(u,v)w|^2 w on unit "
       "tangent probes"},
      {"energy-conservation",
       "per-trajectory: Hamiltonian drift along the integrated geodesic "
       "(tolerance 1e-9)"},
      {"frame-invariants",
       "pushed frames orthonormal, vertical frames in ker(dpi), coframe "
       "dual to the frame"},
      {"htype-identity",
       "J_alpha^2 = -|alpha|^2 Id and its polarization in the extended "
       "cometric norm"},
      {"j-orthogonality",
       "<J_alpha v, J_alpha w> = 0 for w orthogonal to v and to "
       "sharp(alpha R(v, .))"},
      {"j-squared", "J_alpha^2 v = -|J_alpha v|^2 v on unit directions"},
      {"kappa1-derivative",
       "first-variation identity: sum_i alpha(R(v,X_i)) "
       "alpha((D_v R)(v,X_i)) vanishes"},
      {"nondegenerate-extension",
       "extended cometric positive definite on the frame coframe "
       "(residual is the negated smallest eigenvalue, tolerance -1e-10)"},
      {"normalization-identity",
       "|alpha|^2 in the extended cometric equals (1/n) sum_i "
       "|J_alpha v_i|^2"},
      {"parallel-curvature",
       "covariant derivative of the connection curvature vanishes"},
      {"parallel-j-field",
       "J_alpha(etadot) is parallel along base geodesics under "
       "annihilator transport"},
      {"projection-coincidence",
       "normal geodesic projections match extended geodesic projections "
       "over arc length (tolerance 1e-4)"},
      {"route-agreement",
       "kappa1 from the sampled projection matches kappa1 from the "
       "extremal covector (tolerance 1e-6)"},
      {"step2-decomposition",
       "frame plus curvature fields span the tangent space (residual is "
       "the rank deficiency)"},
      {"vanishing-kappa2",
       "per-trajectory: largest kappa2 along the projection"},
  };
}

}  // namespace subriem
