// Extended cometric, its geodesic flow, and projection comparison.
#include "core/metric_extension.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace subriem {

namespace {

// Vertical curvature field R_ij = pr_V [X_i, X_j] at x, returned as its
// theta-coefficients.
Vec curvatureFieldCoefficients(const SubmersionModel& model, const Vec& x,
                               int i, int j) {
  return verticalCoefficients(model, x, model.frameBracket(x, i, j));
}

Vec curvatureField(const SubmersionModel& model, const Vec& x, int i, int j) {
  const Vec coeffs = curvatureFieldCoefficients(model, x, i, j);
  Vec out = Vec::Zero(model.chartDim());
  for (int k = 0; k < model.verticalDim(); ++k) {
    if (coeffs(k) != 0.0) {
      out += coeffs(k) * model.verticalField(x, k);
    }
  }
  return out;
}

// Jacobian of the curvature field R_ij. Exact when the coefficients are
// constant; otherwise a central difference of the assembled field.
Mat curvatureFieldJacobian(const SubmersionModel& model, const Vec& x, int i,
                           int j) {
  const int d = model.chartDim();
  if (model.constantCurvatureCoefficients()) {
    const Vec coeffs = curvatureFieldCoefficients(model, x, i, j);
    Mat jac = Mat::Zero(d, d);
    for (int k = 0; k < model.verticalDim(); ++k) {
      if (coeffs(k) != 0.0) {
        jac += coeffs(k) * model.fieldJacobian(x, model.baseDim() + k);
      }
    }
    return jac;
  }
  const double h = 1e-6;
  Mat jac(d, d);
  Vec xp = x;
  Vec xm = x;
  for (int a = 0; a < d; ++a) {
    xp(a) += h;
    xm(a) -= h;
    jac.col(a) = (curvatureField(model, xp, i, j) -
                  curvatureField(model, xm, i, j)) /
                 (2.0 * h);
    xp(a) = x(a);
    xm(a) = x(a);
  }
  return jac;
}

// Arc length accumulated along the sampled curve, per sample, by
// composite Simpson with interpolated midpoints.
Vec arcLengthTable(const SubmersionModel& model, const BaseTrajectory& eta) {
  const int count = static_cast<int>(eta.times.size());
  Vec table = Vec::Zero(count);
  auto speedAt = [&model](const Vec& y, const Vec& yd) {
    return std::sqrt(yd.dot(model.baseMetric(y) * yd));
  };
  for (int k = 0; k + 1 < count; ++k) {
    const double tMid = 0.5 * (eta.times(k) + eta.times(k + 1));
    const Vec yMid = interpolateRows(eta.times, eta.y, tMid);
    const Vec ydMid = interpolateRows(eta.times, eta.ydot, tMid);
    const double sA = speedAt(eta.y.row(k).transpose(), eta.ydot.row(k).transpose());
    const double sM = speedAt(yMid, ydMid);
    const double sB = speedAt(eta.y.row(k + 1).transpose(),
                              eta.ydot.row(k + 1).transpose());
    table(k + 1) = table(k) + eta.step / 6.0 * (sA + 4.0 * sM + sB);
  }
  return table;
}

Vec positionAtArcLength(const BaseTrajectory& eta, const Vec& table, double s) {
  const int count = static_cast<int>(table.size());
  if (count == 1 || s <= table(0)) {
    return eta.y.row(0).transpose();
  }
  if (s >= table(count - 1)) {
    return eta.y.row(count - 1).transpose();
  }
  int lo = 0;
  int hi = count - 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (table(mid) <= s ? lo : hi) = mid;
  }
  const double span = table(lo + 1) - table(lo);
  const double frac = span > 1e-15 ? (s - table(lo)) / span : 0.0;
  const double t = eta.times(lo) + frac * (eta.times(lo + 1) - eta.times(lo));
  return interpolateRows(eta.times, eta.y, t);
}

}  // namespace

Mat extendedCometric(const SubmersionModel& model, const Vec& x) {
  return extendedCometric(model, x, canonicalWeight(model.baseDim()));
}

Mat extendedCometric(const SubmersionModel& model, const Vec& x,
                     double weight) {
  const int d = model.chartDim();
  const int n = model.baseDim();
  Mat cometric = Mat::Zero(d, d);
  for (int i = 0; i < n; ++i) {
    const Vec field = model.horizontalField(x, i);
    cometric += field * field.transpose();
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Vec field = curvatureField(model, x, i, j);
      cometric += weight * (field * field.transpose());
    }
  }
  return cometric;
}

double extendedEnergy(const SubmersionModel& model, const Vec& x,
                      const Vec& lambda) {
  model.validatePoint(x);
  if (lambda.size() != model.chartDim()) {
    throw InputError("covector dimension mismatch");
  }
  return 0.5 * lambda.dot(extendedCometric(model, x) * lambda);
}

PhaseTrajectory integrateExtendedGeodesic(const SubmersionModel& model,
                                          const Vec& x0, const Vec& lambda0,
                                          double T, double h,
                                          bool normalizeArcLength) {
  model.validatePoint(x0);
  if (lambda0.size() != model.chartDim()) {
    throw InputError("initial covector has dimension " +
                     std::to_string(lambda0.size()) + ", expected " +
                     std::to_string(model.chartDim()));
  }
  if (!lambda0.allFinite()) {
    throw InputError("initial covector has non-finite entries");
  }

  Vec lam = lambda0;
  bool normalized = false;
  const double speedSq = 2.0 * extendedEnergy(model, x0, lam);
  if (normalizeArcLength && speedSq > 1e-14) {
    lam /= std::sqrt(speedSq);
    normalized = true;
  }

  const int d = model.chartDim();
  const int n = model.baseDim();
  const double weight = canonicalWeight(n);
  const RhsFn rhs = [&model, d, n, weight](double, const Vec& s) {
    const Vec x = s.head(d);
    const Vec lambda = s.tail(d);
    Vec xdot = Vec::Zero(d);
    Vec lambdadot = Vec::Zero(d);
    for (int i = 0; i < n; ++i) {
      const Vec field = model.horizontalField(x, i);
      const double ui = lambda.dot(field);
      xdot += ui * field;
      lambdadot -= ui * (model.fieldJacobian(x, i).transpose() * lambda);
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Vec field = curvatureField(model, x, i, j);
        const double omega = lambda.dot(field);
        if (omega != 0.0) {
          xdot += weight * omega * field;
          lambdadot -= weight * omega *
                       (curvatureFieldJacobian(model, x, i, j).transpose() *
                        lambda);
        }
      }
    }
    Vec out(2 * d);
    out << xdot, lambdadot;
    return out;
  };

  const int steps = stepCountFor(T, h);
  const double heff = steps > 0 ? T / steps : h;
  Vec s0(2 * d);
  s0 << x0, lam;
  const Mat samples = integrateRk4(rhs, s0, 0.0, heff, steps);

  PhaseTrajectory traj;
  traj.times.resize(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    traj.times(i) = heff * i;
  }
  traj.x = samples.leftCols(d);
  traj.lambda = samples.rightCols(d);
  traj.step = heff;
  traj.normalized = normalized;
  return traj;
}

BaseTrajectory projectExtendedToBase(const SubmersionModel& model,
                                     const PhaseTrajectory& traj) {
  const int count = static_cast<int>(traj.times.size());
  const int dn = model.baseChartDim();
  BaseTrajectory base;
  base.times = traj.times;
  base.step = traj.step;
  base.y.resize(count, dn);
  base.ydot.resize(count, dn);
  for (int s = 0; s < count; ++s) {
    const Vec x = traj.x.row(s).transpose();
    const Vec lambda = traj.lambda.row(s).transpose();
    const Vec xdot = extendedCometric(model, x) * lambda;
    base.y.row(s) = model.projectPoint(x).transpose();
    base.ydot.row(s) = (model.projectionDifferential(x) * xdot).transpose();
  }
  return base;
}

ProjectionComparison compareProjections(const SubmersionModel& model,
                                        const Vec& x0, const Vec& lambda0,
                                        double T, double h) {
  const PhaseTrajectory srTraj =
      integrateNormalGeodesic(model, x0, lambda0, T, h, true);
  const BaseTrajectory srBase = projectToBase(model, srTraj);
  // The normalized covector, so both flows start with the same horizontal
  // speed. Their vertical speeds differ; arc-length matching absorbs that.
  const Vec lambdaN = srTraj.lambda.row(0).transpose();

  ProjectionComparison cmp;
  const PhaseTrajectory extTraj =
      integrateExtendedGeodesic(model, x0, lambdaN, T, h, false);
  const BaseTrajectory extBase = projectExtendedToBase(model, extTraj);

  const Vec srLen = arcLengthTable(model, srBase);
  const Vec extLen = arcLengthTable(model, extBase);
  const int srCount = static_cast<int>(srLen.size());
  const double sMax =
      std::min(srLen(srCount - 1), extLen(static_cast<int>(extLen.size()) - 1));
  cmp.matchedArcLength = sMax;

  double deviation =
      (srBase.y.row(0) - extBase.y.row(0)).norm();
  for (int k = 0; k < srCount; ++k) {
    const double s = std::min(srLen(k), sMax);
    const Vec other = positionAtArcLength(extBase, extLen, s);
    const Vec own = positionAtArcLength(srBase, srLen, s);
    deviation = std::max(deviation, (own - other).norm());
    if (srLen(k) >= sMax) {
      break;
    }
  }
  cmp.maxDeviation = deviation;
  return cmp;
}

}  // namespace subriem
