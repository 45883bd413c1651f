// Frenet geodesic curvatures kappa_1, kappa_2 of base curves, computed
// two independent ways: finite differencing of the sampled projection,
// and the extremal-covector formulas evaluated along the Hamiltonian
// trajectory upstairs.
#pragma once

#include "core/flows.hpp"
#include "core/linalg.hpp"
#include "core/model.hpp"

namespace subriem {

// Curvature samples along a curve with summary statistics. kappa2 is
// zero at samples where kappa1 falls below the floor (the normal e_2 is
// undefined there).
struct CurvatureProfile {
  Vec times;
  Vec kappa1;
  Vec kappa2;
  double kappa1Mean = 0.0;
  double kappa1RelStd = 0.0;  // std/mean; plain std when the mean is ~0
  double kappa2Max = 0.0;
  bool kappa1Constant = false;
  bool kappa2Vanishing = false;
};

struct CurveClass {
  bool kappa1Constant = false;
  bool kappa2Vanishing = false;
};

// Samples below which kappa1 is treated as vanishing and e_2 undefined.
inline constexpr double kKappaFloor = 1e-7;
// Default classification tolerances (relative kappa1 spread, kappa2 max).
inline constexpr double kKappa1RelTol = 1e-6;
inline constexpr double kKappa2Tol = 1e-5;

// Fourth-order d/dt of uniformly sampled rows: central five-point
// stencils in the interior, one-sided five-point stencils at the edges.
// Needs at least 5 rows.
Mat derivativeSamples(const Mat& rows, double h);

// Curvatures from the sampled curve alone: covariant acceleration by
// stencils plus Christoffels, kappa2 from the covariant derivative of
// e_2 projected orthogonally to span{e_1, e_2}. Requires at least 8
// samples and unit speed within 1e-4.
CurvatureProfile frenetCurvatures(const SubmersionModel& model,
                                  const BaseTrajectory& eta);

// Curvatures from the extremal covector:
//   kappa1 = |lambda R(gammadot, .)|_{g*},
//   kappa2 = (1/kappa1) |lambda (D_gammadot R)(gammadot, .)
//            + lambda R(D_gammadot gammadot, .)
//            - (kappa1dot/kappa1) lambda R(gammadot, .)
//            + kappa1^2 lambda|_{g*}.
// Checks energy conservation along the trajectory first. kappa2
// evaluation is optional (it needs one covariant derivative of the
// curvature per sample).
CurvatureProfile kappaViaExtremal(const SubmersionModel& model,
                                  const PhaseTrajectory& traj,
                                  bool computeKappa2 = true);

// Covariant derivative (D_v R)(a, b) at x, a vertical chart vector.
// Inputs are projected to the distribution. Transports a and b by base
// parallel transport lifted horizontally, the vertical coframe by
// annihilator transport, and differences the curvature pairings
// centrally at +/- hFd.
Vec covDerivR(const SubmersionModel& model, const Vec& x, const Vec& v,
              const Vec& a, const Vec& b, double hFd = 1e-4);

CurveClass classifyCurve(const CurvatureProfile& profile, double kappa1RelTol,
                         double kappa2Tol);

}  // namespace subriem
