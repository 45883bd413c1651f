// Canonical Riemannian extension of the sub-Riemannian cometric and the
// comparison between sub-Riemannian and extended geodesic projections.
#pragma once

#include "core/flows.hpp"
#include "core/linalg.hpp"
#include "core/model.hpp"

namespace subriem {

// Weight of the curvature block in the canonical extension.
inline double canonicalWeight(int baseDim) { return 2.0 / baseDim; }

// Chart matrix of the extended cometric
//   G*(x) = sum_i X_i X_i^T + weight * sum_{i<j} R_ij R_ij^T
// with R_ij = pr_V [X_i, X_j]. The default weight 2/n makes the squared
// norm of an annihilator covector equal to (1/n) sum_i |J_alpha v_i|^2
// over any horizontal orthonormal v_i.
Mat extendedCometric(const SubmersionModel& model, const Vec& x);
Mat extendedCometric(const SubmersionModel& model, const Vec& x, double weight);

// Extended Hamiltonian (1/2) lambda^T G*(x) lambda at canonical weight.
double extendedEnergy(const SubmersionModel& model, const Vec& x,
                      const Vec& lambda);

// Riemannian geodesic flow of the extended metric in phase space:
//   xdot = G* lambda,  lambdadot_a = -(1/2) lambda^T (d_a G*) lambda.
// Normalization rescales lambda0 to unit extended speed when requested.
PhaseTrajectory integrateExtendedGeodesic(const SubmersionModel& model,
                                          const Vec& x0, const Vec& lambda0,
                                          double T, double h,
                                          bool normalizeArcLength = false);

// Projection of an extended phase trajectory with ydot = dpi(G* lambda).
BaseTrajectory projectExtendedToBase(const SubmersionModel& model,
                                     const PhaseTrajectory& traj);

struct ProjectionComparison {
  double maxDeviation = 0.0;      // sup over matched arc length
  double matchedArcLength = 0.0;  // common arc length compared
};

// Integrates the normal geodesic and the extended geodesic from the same
// initial covector and compares the projected curves over matched arc
// length. The vertical parts of the two motions differ, so the curves are
// matched by base arc length rather than by time.
ProjectionComparison compareProjections(const SubmersionModel& model,
                                        const Vec& x0, const Vec& lambda0,
                                        double T, double h);

}  // namespace subriem
