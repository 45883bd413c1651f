// Verification checks: pointwise residuals of the algebraic identities
// relating the connection curvature, the J operators, and the Frenet
// curvatures of projected geodesics, plus a named-check driver that
// probes a model at seeded random configurations.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core/linalg.hpp"
#include "core/model.hpp"

namespace subriem {

// Worst probe configurations of a check, kept for the report.
struct CheckWitness {
  Vec x;      // chart point (empty when not point-based)
  Vec alpha;  // annihilator coefficients (empty when unused)
  Vec v;      // first direction, horizontal frame components
  Vec w;      // second direction
  double residual = 0.0;
};

struct CheckReport {
  std::string name;
  int samples = 0;
  double maxResidual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<CheckWitness> witnesses;
};

struct CheckOptions {
  int samples = -1;  // -1 = per-check default
  std::uint64_t seed = kDefaultSeed;
  double tolAlgebraic = 1e-10;
  double tolNumeric = 1e-5;
  double horizon = 1.0;   // trajectory-based checks
  double step = 1e-3;
};

// |J_{transported alpha}(etadot)| drift along a base geodesic: eta runs
// from pi(x0) with unit velocity sum_i v_i dpi(X_i), alpha rides the
// annihilator transport of the horizontal lift.
double constantJLengthResidual(const SubmersionModel& model, const Vec& x0,
                               const Vec& alphaCoeffs, const Vec& vComponents,
                               double T, double h);

// Distance between the field J_{transported alpha}(etadot) and the
// parallel transport of its initial value along eta.
double parallelJFieldResidual(const SubmersionModel& model, const Vec& x0,
                              const Vec& alphaCoeffs, const Vec& vComponents,
                              double T, double h);

// |J_alpha^2 v + |J_alpha v|^2 v| for unit v.
double jSquaredResidual(const SubmersionModel& model, const Vec& x,
                        const Vec& alphaCoeffs, const Vec& vComponents);

// |<J_alpha v, J_alpha w>| after projecting w orthogonally to v and to
// sharp(alpha R(v, .)); zero when no admissible w remains.
double jOrthogonalityResidual(const SubmersionModel& model, const Vec& x,
                              const Vec& alphaCoeffs, const Vec& vComponents,
                              const Vec& wComponents);

// |sum_i rho_i sigma_i| with rho_i = alpha(R(v, X_i)) and
// sigma_i = alpha((D_v R)(v, X_i)); the first-variation formula for
// kappa1 along the geodesic tangent to v.
double kappaDerivativeResidual(const SubmersionModel& model, const Vec& x,
                               const Vec& alphaCoeffs, const Vec& vComponents);

// Operator norms of J_alpha^2 + |alpha|^2_{g*M} Id and of the
// polarized identity J_alpha J_beta + J_beta J_alpha + 2<alpha, beta> Id.
std::pair<double, double> hTypeResiduals(const SubmersionModel& model,
                                         const Vec& x, const Vec& alphaCoeffs,
                                         const Vec& betaCoeffs);

// | |alpha|^2_{g*M} - (1/n) sum_i |J_alpha v_i|^2 | over the horizontal
// frame.
double normalizationResidual(const SubmersionModel& model, const Vec& x,
                             const Vec& alphaCoeffs);

// Off-diagonal plus negative-eigenvalue mass of -A_k^2 over all k,
// where A_k(i, j) = theta^k([X_i, X_j]).
double coframeDiagonalResidual(const SubmersionModel& model, const Vec& x);

// |R(u,v)R(u,v)w + |R(u,v)w|^2 w|_gN for gN-unit tangent u, v, w.
double curvatureSquareResidual(const CurvatureOperator& op, const Mat& gN,
                               const Vec& u, const Vec& v, const Vec& w);

// |(D_v R)(a, b)| for horizontal directions; zero when the connection
// curvature is parallel.
double parallelCurvatureResidual(const SubmersionModel& model, const Vec& x,
                                 const Vec& v, const Vec& a, const Vec& b);

// Rank of span{X_i, R(X_i, X_j)} at x. kernelWitness (optional) gets a
// unit chart vector orthogonal to the span when deficient.
int step2DecompositionRank(const SubmersionModel& model, const Vec& x,
                           Vec* kernelWitness);

// Smallest eigenvalue of the extended cometric restricted to the span
// of the frame coframe (detects degenerate extensions).
double nondegeneracyMinEigenvalue(const SubmersionModel& model, const Vec& x);

// Named checks over seeded probes.
CheckReport runCheck(const SubmersionModel& model, const std::string& name,
                     const CheckOptions& opts);
// Model-level check names accepted by runCheck, sorted.
std::vector<std::string> modelCheckNames();
// All check names with one-line descriptions (model-level plus the
// per-trajectory checks applied by experiment runs), sorted.
std::vector<std::pair<std::string, std::string>> allCheckDescriptions();

}  // namespace subriem
