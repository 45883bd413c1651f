// Fixed-step integrators and transports.
#include "core/flows.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace subriem {

namespace {

constexpr double kBlowUpNorm = 1e12;
constexpr long long kMaxSteps = 50'000'000;

void requireFiniteVec(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    throw InputError(std::string(what) + " has non-finite entries");
  }
}

// Contraction Gamma^k_{ij} a^i b^j for all k.
Vec christoffelContract(const Tensor3& gamma, const Vec& a, const Vec& b) {
  Vec out(static_cast<int>(gamma.size()));
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    out(static_cast<int>(k)) = a.dot(gamma[k] * b);
  }
  return out;
}

Vec gridTimes(double heff, int steps) {
  Vec times(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    times(i) = heff * i;
  }
  return times;
}

}  // namespace

int stepCountFor(double T, double h) {
  if (!std::isfinite(T) || T < 0.0) {
    throw InputError("horizon T must be finite and nonnegative");
  }
  if (!std::isfinite(h) || h <= 0.0) {
    throw InputError("step h must be finite and positive");
  }
  if (T == 0.0) {
    return 0;
  }
  const long long steps = std::max(1ll, std::llround(T / h));
  if (steps > kMaxSteps) {
    throw InputError("horizon/step ratio exceeds " + std::to_string(kMaxSteps) +
                     " steps");
  }
  return static_cast<int>(steps);
}

Mat integrateRk4(const RhsFn& rhs, const Vec& s0, double t0, double h,
                 int steps) {
  requireFiniteVec(s0, "initial state");
  const int dim = static_cast<int>(s0.size());
  Mat out(steps + 1, dim);
  out.row(0) = s0.transpose();
  Vec s = s0;
  for (int step = 0; step < steps; ++step) {
    const double t = t0 + h * step;
    const Vec k1 = rhs(t, s);
    const Vec k2 = rhs(t + 0.5 * h, s + (0.5 * h) * k1);
    const Vec k3 = rhs(t + 0.5 * h, s + (0.5 * h) * k2);
    const Vec k4 = rhs(t + h, s + h * k3);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!s.allFinite() || s.norm() > kBlowUpNorm) {
      throw DivergenceError("trajectory norm exceeded " +
                                std::to_string(kBlowUpNorm),
                            t);
    }
    out.row(step + 1) = s.transpose();
  }
  return out;
}

Vec interpolateRows(const Vec& times, const Mat& rows, double t) {
  const int count = static_cast<int>(times.size());
  if (count < 1 || rows.rows() != count) {
    throw InputError("interpolation needs matching, nonempty samples");
  }
  if (count == 1) {
    return rows.row(0).transpose();
  }
  const double t0 = times(0);
  const double h = times(1) - times(0);
  if (h <= 0.0) {
    throw InputError("interpolation grid is not increasing");
  }
  const double tc = std::clamp(t, times(0), times(count - 1));
  if (count < 4) {
    // Linear fallback between the two nearest samples.
    int i = std::clamp(static_cast<int>(std::floor((tc - t0) / h)), 0, count - 2);
    const double s = (tc - times(i)) / h;
    return ((1.0 - s) * rows.row(i) + s * rows.row(i + 1)).transpose();
  }
  int i0 = static_cast<int>(std::floor((tc - t0) / h)) - 1;
  i0 = std::clamp(i0, 0, count - 4);
  const double s = (tc - times(i0)) / h;
  Vec out = Vec::Zero(rows.cols());
  for (int k = 0; k < 4; ++k) {
    double w = 1.0;
    for (int j = 0; j < 4; ++j) {
      if (j != k) {
        w *= (s - j) / (k - j);
      }
    }
    out += w * rows.row(i0 + k).transpose();
  }
  return out;
}

PhaseTrajectory integrateNormalGeodesic(const SubmersionModel& model,
                                        const Vec& x0, const Vec& lambda0,
                                        double T, double h,
                                        bool normalizeArcLength) {
  model.validatePoint(x0);
  if (lambda0.size() != model.chartDim()) {
    throw InputError("initial covector has dimension " +
                     std::to_string(lambda0.size()) + ", expected " +
                     std::to_string(model.chartDim()));
  }
  requireFiniteVec(lambda0, "initial covector");

  Vec lam = lambda0;
  bool normalized = false;
  const double h0 = hamiltonianEnergy(model, x0, lam);
  if (normalizeArcLength && 2.0 * h0 > 1e-14) {
    lam /= std::sqrt(2.0 * h0);
    normalized = true;
  }

  const int d = model.chartDim();
  const int n = model.baseDim();
  const RhsFn rhs = [&model, d, n](double, const Vec& s) {
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
  traj.times = gridTimes(heff, steps);
  traj.x = samples.leftCols(d);
  traj.lambda = samples.rightCols(d);
  traj.step = heff;
  traj.normalized = normalized;
  return traj;
}

BaseTrajectory projectToBase(const SubmersionModel& model,
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
    base.y.row(s) = model.projectPoint(x).transpose();
    base.ydot.row(s) =
        (model.projectionDifferential(x) * sharp(model, x, lambda)).transpose();
  }
  return base;
}

BaseTrajectory riemannGeodesicBase(const SubmersionModel& model, const Vec& y0,
                                   const Vec& v0, double T, double h) {
  const int dn = model.baseChartDim();
  if (y0.size() != dn || v0.size() != dn) {
    throw InputError("base point/velocity dimension mismatch");
  }
  requireFiniteVec(y0, "base point");
  requireFiniteVec(v0, "base velocity");

  const RhsFn rhs = [&model, dn](double, const Vec& s) {
    const Vec y = s.head(dn);
    const Vec v = s.tail(dn);
    const Tensor3 gamma = model.baseChristoffels(y);
    Vec out(2 * dn);
    out << v, -christoffelContract(gamma, v, v);
    return out;
  };

  const int steps = stepCountFor(T, h);
  const double heff = steps > 0 ? T / steps : h;
  Vec s0(2 * dn);
  s0 << y0, v0;
  const Mat samples = integrateRk4(rhs, s0, 0.0, heff, steps);

  BaseTrajectory base;
  base.times = gridTimes(heff, steps);
  base.y = samples.leftCols(dn);
  base.ydot = samples.rightCols(dn);
  base.step = heff;
  return base;
}

Mat parallelTransportBase(const SubmersionModel& model,
                          const BaseTrajectory& eta, const Vec& w0) {
  const int dn = model.baseChartDim();
  if (w0.size() != dn) {
    throw InputError("transported vector dimension mismatch");
  }
  requireFiniteVec(w0, "transported vector");
  const int steps = static_cast<int>(eta.times.size()) - 1;
  if (steps < 0) {
    throw InputError("transport needs a nonempty curve");
  }
  if (steps == 0) {
    return w0.transpose();
  }

  const RhsFn rhs = [&model, &eta](double t, const Vec& w) {
    const Vec y = interpolateRows(eta.times, eta.y, t);
    const Vec yd = interpolateRows(eta.times, eta.ydot, t);
    return Vec(-christoffelContract(model.baseChristoffels(y), yd, w));
  };
  return integrateRk4(rhs, w0, eta.times(0), eta.step, steps);
}

PathOnM horizontalLift(const SubmersionModel& model, const BaseTrajectory& eta,
                       const Vec& x0) {
  model.validatePoint(x0);
  const int steps = static_cast<int>(eta.times.size()) - 1;
  if (steps < 0) {
    throw InputError("lift needs a nonempty curve");
  }
  const Vec start = eta.y.row(0).transpose();
  const double mismatch = (model.projectPoint(x0) - start).norm();
  if (mismatch > 1e-8) {
    throw InputError("lift start projects " + std::to_string(mismatch) +
                     " away from the curve start");
  }

  const RhsFn rhs = [&model, &eta](double t, const Vec& x) {
    const Vec yd = interpolateRows(eta.times, eta.ydot, t);
    return horizontalLiftVector(model, x, yd);
  };

  PathOnM path;
  path.times = eta.times;
  path.step = eta.step;
  path.x = steps == 0 ? Mat(x0.transpose())
                      : integrateRk4(rhs, x0, eta.times(0), eta.step, steps);
  path.xdot.resize(steps + 1, model.chartDim());
  for (int s = 0; s <= steps; ++s) {
    path.xdot.row(s) =
        rhs(path.times(s), Vec(path.x.row(s).transpose())).transpose();
  }
  return path;
}

Mat annihilatorTransport(const SubmersionModel& model, const PathOnM& path,
                         const Vec& b0) {
  const int vd = model.verticalDim();
  const int n = model.baseDim();
  if (b0.size() != vd) {
    throw InputError("annihilator coefficient dimension mismatch");
  }
  requireFiniteVec(b0, "annihilator coefficients");
  const int steps = static_cast<int>(path.times.size()) - 1;
  if (steps < 0) {
    throw InputError("transport needs a nonempty path");
  }

  double verticalPart = 0.0;
  for (int s = 0; s <= steps; ++s) {
    const Vec x = path.x.row(s).transpose();
    const Vec v = path.xdot.row(s).transpose();
    verticalPart = std::max(
        verticalPart, verticalCoefficients(model, x, v).cwiseAbs().maxCoeff());
  }
  if (verticalPart > 1e-6) {
    throw InputError("path is not horizontal (vertical velocity component " +
                     std::to_string(verticalPart) + ")");
  }
  if (steps == 0) {
    return b0.transpose();
  }

  // bdot_k = sum_l b_l theta^l([gammadot_h, V_k]).
  const RhsFn rhs = [&model, &path, vd, n](double t, const Vec& b) {
    const Vec x = interpolateRows(path.times, path.x, t);
    const Vec v = interpolateRows(path.times, path.xdot, t);
    const Vec u = horizontalCoefficients(model, x, v);
    Mat transfer = Mat::Zero(vd, vd);  // transfer(l, k) = theta^l([gdot, V_k])
    for (int k = 0; k < vd; ++k) {
      Vec mixed = Vec::Zero(model.chartDim());
      for (int i = 0; i < n; ++i) {
        if (u(i) != 0.0) {
          mixed += u(i) * model.frameBracket(x, i, n + k);
        }
      }
      transfer.col(k) = verticalCoefficients(model, x, mixed);
    }
    return Vec(transfer.transpose() * b);
  };
  return integrateRk4(rhs, b0, path.times(0), path.step, steps);
}

double energyDrift(const SubmersionModel& model, const PhaseTrajectory& traj) {
  const int count = static_cast<int>(traj.times.size());
  if (count < 1) {
    throw InputError("energy drift needs a nonempty trajectory");
  }
  const double h0 = hamiltonianEnergy(model, Vec(traj.x.row(0).transpose()),
                                      Vec(traj.lambda.row(0).transpose()));
  double drift = 0.0;
  for (int s = 1; s < count; ++s) {
    const double hs = hamiltonianEnergy(model, Vec(traj.x.row(s).transpose()),
                                        Vec(traj.lambda.row(s).transpose()));
    drift = std::max(drift, std::abs(hs - h0));
  }
  return drift;
}

}  // namespace subriem
