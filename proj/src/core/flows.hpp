// Fixed-step fourth-order integration of the normal geodesic flow and
// of the transport equations used along curves: base parallel transport,
// horizontal lifting, and annihilator coframe transport.
#pragma once

#include <functional>

#include "core/linalg.hpp"
#include "core/model.hpp"

namespace subriem {

// Hamiltonian trajectory samples (x(t), lambda(t)) on a uniform grid.
struct PhaseTrajectory {
  Vec times;
  Mat x;       // (steps+1) x chartDim
  Mat lambda;  // (steps+1) x chartDim
  double step = 0.0;
  bool normalized = false;  // initial covector rescaled to unit speed
};

// Base curve samples (y(t), ydot(t)).
struct BaseTrajectory {
  Vec times;
  Mat y;     // (steps+1) x baseChartDim
  Mat ydot;
  double step = 0.0;
};

// Curve on the total space with its velocity samples.
struct PathOnM {
  Vec times;
  Mat x;     // (steps+1) x chartDim
  Mat xdot;
  double step = 0.0;
};

using RhsFn = std::function<Vec(double, const Vec&)>;

// Number of uniform steps covering [0, T] at nominal step h; the
// effective step is T divided by this count. Zero-length horizons give
// zero steps (a single sample). Throws InputError on h <= 0, T < 0, or
// an absurd step count.
int stepCountFor(double T, double h);

// Classical Runge-Kutta 4 from t0 over `steps` steps of size h. Returns
// the (steps+1) x dim sample matrix. Throws DivergenceError carrying the
// last good time when the state norm exceeds 1e12 or turns non-finite.
Mat integrateRk4(const RhsFn& rhs, const Vec& s0, double t0, double h,
                 int steps);

// Four-point Lagrange interpolation of uniformly sampled rows; falls
// back to lower order when fewer samples exist. Queries are clamped to
// the sampled range.
Vec interpolateRows(const Vec& times, const Mat& rows, double t);

// Integrates the normal geodesic equations
//   xdot = sum_i u_i X_i,  lambdadot = -sum_i u_i (DX_i)^T lambda,
// with u_i = lambda(X_i). When normalizeArcLength is set and the
// initial energy is positive, lambda0 is rescaled so |sharp lambda|_g = 1;
// covectors annihilating the distribution yield constant trajectories.
PhaseTrajectory integrateNormalGeodesic(const SubmersionModel& model,
                                        const Vec& x0, const Vec& lambda0,
                                        double T, double h,
                                        bool normalizeArcLength = true);

// Projected curve eta = pi(gamma) with etadot = dpi(sharp lambda).
BaseTrajectory projectToBase(const SubmersionModel& model,
                             const PhaseTrajectory& traj);

// Riemannian geodesic on the base through y0 with initial velocity v0.
BaseTrajectory riemannGeodesicBase(const SubmersionModel& model, const Vec& y0,
                                   const Vec& v0, double T, double h);

// Parallel transport of w0 along eta; row t holds the transported
// vector at eta.times(t).
Mat parallelTransportBase(const SubmersionModel& model,
                          const BaseTrajectory& eta, const Vec& w0);

// Horizontal lift of eta through x0. Requires pi(x0) to match eta's
// start within 1e-8.
PathOnM horizontalLift(const SubmersionModel& model, const BaseTrajectory& eta,
                       const Vec& x0);

// Transport of an annihilator covector along a horizontal path: b0
// holds theta-coefficients at path start, row t the coefficients at
// path.times(t). The transported covector beta(t) = sum_k b_k theta^k
// satisfies beta(t)(W) = const for every curvature-transported W.
// Throws InputError when the path velocity has a vertical component
// above 1e-6.
Mat annihilatorTransport(const SubmersionModel& model, const PathOnM& path,
                         const Vec& b0);

// Largest |H(t) - H(0)| along a phase trajectory.
double energyDrift(const SubmersionModel& model, const PhaseTrajectory& traj);

}  // namespace subriem
