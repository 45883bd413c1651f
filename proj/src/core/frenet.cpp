// Curvature extraction along projected geodesics.
#include "core/frenet.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace subriem {

namespace {

constexpr int kMinSamples = 8;
constexpr double kUnitSpeedTol = 1e-4;
constexpr double kMeanFloor = 1e-12;

Vec christoffelContract(const Tensor3& gamma, const Vec& a, const Vec& b) {
  Vec out(static_cast<int>(gamma.size()));
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    out(static_cast<int>(k)) = a.dot(gamma[k] * b);
  }
  return out;
}

void fillStatistics(CurvatureProfile& profile) {
  const int count = static_cast<int>(profile.kappa1.size());
  profile.kappa1Mean = profile.kappa1.mean();
  double var = 0.0;
  for (int s = 0; s < count; ++s) {
    const double d = profile.kappa1(s) - profile.kappa1Mean;
    var += d * d;
  }
  const double sd = std::sqrt(var / count);
  profile.kappa1RelStd = std::abs(profile.kappa1Mean) > kMeanFloor
                             ? sd / std::abs(profile.kappa1Mean)
                             : sd;
  profile.kappa2Max =
      profile.kappa2.size() > 0 ? profile.kappa2.cwiseAbs().maxCoeff() : 0.0;
  const CurveClass cls = classifyCurve(profile, kKappa1RelTol, kKappa2Tol);
  profile.kappa1Constant = cls.kappa1Constant;
  profile.kappa2Vanishing = cls.kappa2Vanishing;
}

// Index range whose samples feed the derivative stencil at sample s.
std::pair<int, int> stencilWindow(int s, int count) {
  if (s <= 1) {
    return {0, 4};
  }
  if (s >= count - 2) {
    return {count - 5, count - 1};
  }
  return {s - 2, s + 2};
}

}  // namespace

Mat derivativeSamples(const Mat& rows, double h) {
  const int count = static_cast<int>(rows.rows());
  if (count < 5) {
    throw InputError("derivative stencils need at least 5 samples, got " +
                     std::to_string(count));
  }
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InputError("derivative stencils need a positive step");
  }
  const double inv = 1.0 / (12.0 * h);
  const int last = count - 1;
  Mat out(count, rows.cols());
  out.row(0) = (-25.0 * rows.row(0) + 48.0 * rows.row(1) - 36.0 * rows.row(2) +
                16.0 * rows.row(3) - 3.0 * rows.row(4)) *
               inv;
  out.row(1) = (-3.0 * rows.row(0) - 10.0 * rows.row(1) + 18.0 * rows.row(2) -
                6.0 * rows.row(3) + rows.row(4)) *
               inv;
  for (int s = 2; s <= count - 3; ++s) {
    out.row(s) = (rows.row(s - 2) - 8.0 * rows.row(s - 1) +
                  8.0 * rows.row(s + 1) - rows.row(s + 2)) *
                 inv;
  }
  out.row(last - 1) = (3.0 * rows.row(last) + 10.0 * rows.row(last - 1) -
                       18.0 * rows.row(last - 2) + 6.0 * rows.row(last - 3) -
                       rows.row(last - 4)) *
                      inv;
  out.row(last) = (25.0 * rows.row(last) - 48.0 * rows.row(last - 1) +
                   36.0 * rows.row(last - 2) - 16.0 * rows.row(last - 3) +
                   3.0 * rows.row(last - 4)) *
                  inv;
  return out;
}

CurvatureProfile frenetCurvatures(const SubmersionModel& model,
                                  const BaseTrajectory& eta) {
  const int count = static_cast<int>(eta.times.size());
  if (count < kMinSamples) {
    throw InputError("curvature extraction needs at least " +
                     std::to_string(kMinSamples) + " samples, got " +
                     std::to_string(count));
  }
  const int dn = model.baseChartDim();

  std::vector<Mat> metric(count);
  std::vector<Tensor3> gamma(count);
  Vec speed(count);
  for (int s = 0; s < count; ++s) {
    const Vec y = eta.y.row(s).transpose();
    const Vec v = eta.ydot.row(s).transpose();
    metric[s] = model.baseMetric(y);
    gamma[s] = model.baseChristoffels(y);
    speed(s) = std::sqrt(v.dot(metric[s] * v));
    if (std::abs(speed(s) - 1.0) > kUnitSpeedTol) {
      throw InputError("curve speed " + std::to_string(speed(s)) +
                       " at sample " + std::to_string(s) +
                       " is not unit; rescale the initial covector");
    }
  }

  const Mat etaddot = derivativeSamples(eta.ydot, eta.step);

  CurvatureProfile profile;
  profile.times = eta.times;
  profile.kappa1.resize(count);
  profile.kappa2 = Vec::Zero(count);

  Mat e2 = Mat::Zero(count, dn);
  std::vector<char> valid(count, 0);
  for (int s = 0; s < count; ++s) {
    const Vec v = eta.ydot.row(s).transpose();
    const Vec accel =
        etaddot.row(s).transpose() + christoffelContract(gamma[s], v, v);
    profile.kappa1(s) = std::sqrt(accel.dot(metric[s] * accel));
    if (profile.kappa1(s) > kKappaFloor) {
      valid[s] = 1;
      e2.row(s) = (accel / profile.kappa1(s)).transpose();
    }
  }

  const Mat e2dot = derivativeSamples(e2, eta.step);
  for (int s = 0; s < count; ++s) {
    const auto [lo, hi] = stencilWindow(s, count);
    bool windowValid = true;
    for (int i = lo; i <= hi; ++i) {
      windowValid = windowValid && valid[i];
    }
    if (!windowValid) {
      continue;
    }
    const Vec v = eta.ydot.row(s).transpose();
    const Vec e1 = v / speed(s);
    const Vec e2s = e2.row(s).transpose();
    Vec cov = e2dot.row(s).transpose() + christoffelContract(gamma[s], v, e2s);
    cov -= cov.dot(metric[s] * e1) * e1;
    cov -= cov.dot(metric[s] * e2s) * e2s;
    profile.kappa2(s) = std::sqrt(cov.dot(metric[s] * cov));
  }

  fillStatistics(profile);
  return profile;
}

namespace {

// Shared transport system for the covariant derivative of the
// curvature: a base geodesic with parallel fields, its horizontal lift,
// and the annihilator coframe coefficients along the lift. The state is
//   [y | w | B transported base vectors | gamma | Theta (vd x vd)].
struct CurvatureTransportSystem {
  const SubmersionModel& model;
  int dn;
  int dm;
  int vd;
  int n;
  int transported;  // number of parallel base vectors

  int stateSize() const { return dn * (2 + transported) + dm + vd * vd; }

  Vec rhs(const Vec& s) const {
    const Vec y = s.segment(0, dn);
    const Vec w = s.segment(dn, dn);
    const Vec gammaPoint = s.segment(dn * (2 + transported), dm);
    const Tensor3 christoffel = model.baseChristoffels(y);

    Vec out(stateSize());
    out.segment(0, dn) = w;
    Vec wdot(dn);
    for (int k = 0; k < dn; ++k) {
      wdot(k) = -w.dot(christoffel[k] * w);
    }
    out.segment(dn, dn) = wdot;
    for (int t = 0; t < transported; ++t) {
      const Vec field = s.segment(dn * (2 + t), dn);
      Vec fdot(dn);
      for (int k = 0; k < dn; ++k) {
        fdot(k) = -w.dot(christoffel[k] * field);
      }
      out.segment(dn * (2 + t), dn) = fdot;
    }

    const Vec lift = horizontalLiftVector(model, gammaPoint, w);
    out.segment(dn * (2 + transported), dm) = lift;

    // Theta row k holds the theta-coefficients of the k-th transported
    // annihilator covector; Thetadot = Theta * M with
    // M(l, j) = theta^l([gammadot_h, V_j]).
    const Vec u = horizontalCoefficients(model, gammaPoint, lift);
    Mat transfer = Mat::Zero(vd, vd);
    for (int j = 0; j < vd; ++j) {
      Vec mixed = Vec::Zero(dm);
      for (int i = 0; i < n; ++i) {
        if (u(i) != 0.0) {
          mixed += u(i) * model.frameBracket(gammaPoint, i, n + j);
        }
      }
      transfer.col(j) = verticalCoefficients(model, gammaPoint, mixed);
    }
    const int thetaOffset = dn * (2 + transported) + dm;
    Mat theta(vd, vd);
    for (int r = 0; r < vd; ++r) {
      theta.row(r) = s.segment(thetaOffset + r * vd, vd).transpose();
    }
    const Mat thetadot = theta * transfer;
    for (int r = 0; r < vd; ++r) {
      out.segment(thetaOffset + r * vd, vd) = thetadot.row(r).transpose();
    }
    return out;
  }
};

// Curvature pairings c_k(sigma) = beta^k(R(atilde, btilde)) at the
// transported configuration, for each transported b in `bIndices`.
std::vector<Vec> curvaturePairings(const CurvatureTransportSystem& sys,
                                   const Vec& state,
                                   const std::vector<int>& bIndices,
                                   int aIndex) {
  const int dn = sys.dn;
  const Vec gammaPoint = state.segment(dn * (2 + sys.transported), sys.dm);
  const int thetaOffset = dn * (2 + sys.transported) + sys.dm;
  Mat theta(sys.vd, sys.vd);
  for (int r = 0; r < sys.vd; ++r) {
    theta.row(r) = state.segment(thetaOffset + r * sys.vd, sys.vd).transpose();
  }
  const Vec aBase = state.segment(dn * (2 + aIndex), dn);
  const Vec aLift = horizontalLiftVector(sys.model, gammaPoint, aBase);
  std::vector<Vec> out;
  out.reserve(bIndices.size());
  for (const int bIdx : bIndices) {
    const Vec bBase = state.segment(dn * (2 + bIdx), dn);
    const Vec bLift = horizontalLiftVector(sys.model, gammaPoint, bBase);
    const Vec curv = curvatureR(sys.model, gammaPoint, aLift, bLift);
    out.push_back(theta * verticalCoefficients(sys.model, gammaPoint, curv));
  }
  return out;
}

// (D_v R)(a, b_t) for all transported directions b_t at once.
std::vector<Vec> covDerivRMulti(const SubmersionModel& model, const Vec& x,
                                const Vec& v, const Vec& a,
                                const std::vector<Vec>& bs, double hFd) {
  const int dn = model.baseChartDim();
  const int dm = model.chartDim();
  const int vd = model.verticalDim();
  const int n = model.baseDim();
  if (!(hFd > 0.0) || !std::isfinite(hFd)) {
    throw InputError("covariant derivative needs a positive step");
  }

  const Vec vh = projectHorizontal(model, x, v);
  std::vector<Vec> results(bs.size(), Vec::Zero(dm));
  if (vh.norm() < 1e-14) {
    return results;
  }

  CurvatureTransportSystem sys{model, dn, dm, vd, n,
                               1 + static_cast<int>(bs.size())};
  const Mat dpi = model.projectionDifferential(x);

  Vec s0(sys.stateSize());
  s0.segment(0, dn) = model.projectPoint(x);
  s0.segment(dn, dn) = dpi * vh;
  s0.segment(2 * dn, dn) = dpi * projectHorizontal(model, x, a);
  std::vector<int> bIndices;
  for (std::size_t t = 0; t < bs.size(); ++t) {
    s0.segment(dn * (3 + static_cast<int>(t)), dn) =
        dpi * projectHorizontal(model, x, bs[t]);
    bIndices.push_back(1 + static_cast<int>(t));
  }
  s0.segment(dn * (2 + sys.transported), dm) = x;
  const int thetaOffset = dn * (2 + sys.transported) + dm;
  s0.segment(thetaOffset, vd * vd).setZero();
  for (int r = 0; r < vd; ++r) {
    s0(thetaOffset + r * vd + r) = 1.0;
  }

  const RhsFn rhs = [&sys](double, const Vec& s) { return sys.rhs(s); };
  const int substeps = 8;
  const Mat forward = integrateRk4(rhs, s0, 0.0, hFd / substeps, substeps);
  const Mat backward = integrateRk4(rhs, s0, 0.0, -hFd / substeps, substeps);

  const std::vector<Vec> cPlus = curvaturePairings(
      sys, Vec(forward.row(substeps).transpose()), bIndices, 0);
  const std::vector<Vec> cMinus = curvaturePairings(
      sys, Vec(backward.row(substeps).transpose()), bIndices, 0);

  for (std::size_t t = 0; t < bs.size(); ++t) {
    const Vec cdot = (cPlus[t] - cMinus[t]) / (2.0 * hFd);
    Vec result = Vec::Zero(dm);
    for (int k = 0; k < vd; ++k) {
      result += cdot(k) * model.verticalField(x, k);
    }
    results[t] = result;
  }
  return results;
}

}  // namespace

Vec covDerivR(const SubmersionModel& model, const Vec& x, const Vec& v,
              const Vec& a, const Vec& b, double hFd) {
  return covDerivRMulti(model, x, v, a, {b}, hFd)[0];
}

CurvatureProfile kappaViaExtremal(const SubmersionModel& model,
                                  const PhaseTrajectory& traj,
                                  bool computeKappa2) {
  const int count = static_cast<int>(traj.times.size());
  const int minSamples = computeKappa2 ? kMinSamples : 1;
  if (count < minSamples) {
    throw InputError("extremal curvature needs at least " +
                     std::to_string(minSamples) + " samples, got " +
                     std::to_string(count));
  }
  const int n = model.baseDim();
  const int vd = model.verticalDim();
  const int dm = model.chartDim();

  const double h0 =
      hamiltonianEnergy(model, Vec(traj.x.row(0).transpose()),
                        Vec(traj.lambda.row(0).transpose()));
  if (count >= 2) {
    const double drift = energyDrift(model, traj);
    if (drift > 1e-7 * std::max(1.0, std::abs(h0))) {
      throw InputError("phase samples do not conserve the Hamiltonian (drift " +
                       std::to_string(drift) + "); not a normal geodesic");
    }
  }

  CurvatureProfile profile;
  profile.times = traj.times;
  profile.kappa1.resize(count);
  profile.kappa2 = Vec::Zero(count);

  Mat uAll(count, n);
  Mat rhoAll(count, n);
  for (int s = 0; s < count; ++s) {
    const Vec x = traj.x.row(s).transpose();
    const Vec lambda = traj.lambda.row(s).transpose();
    const Vec u = horizontalPairings(model, x, lambda);
    uAll.row(s) = u.transpose();

    // rho_i = lambda(R(gammadot, X_i)) = sum_j u_j lambda(pr_V [X_j, X_i]).
    const Mat coframe = dualCoframe(model, x);
    Vec lambdaV(vd);
    for (int k = 0; k < vd; ++k) {
      lambdaV(k) = lambda.dot(model.verticalField(x, k));
    }
    Mat pairing = Mat::Zero(n, n);
    for (int j = 0; j < n; ++j) {
      for (int i = j + 1; i < n; ++i) {
        const Vec br = model.frameBracket(x, j, i);
        pairing(j, i) = lambdaV.dot(coframe.middleRows(n, vd) * br);
        pairing(i, j) = -pairing(j, i);
      }
    }
    const Vec rho = pairing.transpose() * u;
    rhoAll.row(s) = rho.transpose();
    profile.kappa1(s) = rho.norm();
  }

  if (computeKappa2) {
    const Mat kappa1dot =
        derivativeSamples(Mat(profile.kappa1), traj.step);
    for (int s = 0; s < count; ++s) {
      const double k1 = profile.kappa1(s);
      if (k1 <= kKappaFloor) {
        continue;
      }
      const Vec x = traj.x.row(s).transpose();
      const Vec lambda = traj.lambda.row(s).transpose();
      const Vec u = uAll.row(s).transpose();
      const Vec rho = rhoAll.row(s).transpose();

      Vec gammadot = Vec::Zero(dm);
      Vec accel = Vec::Zero(dm);
      std::vector<Vec> frame(n);
      for (int i = 0; i < n; ++i) {
        frame[i] = model.horizontalField(x, i);
        gammadot += u(i) * frame[i];
        accel += rho(i) * frame[i];
      }
      const std::vector<Vec> covR =
          covDerivRMulti(model, x, gammadot, gammadot, frame, 1e-4);

      Vec term(n);
      for (int i = 0; i < n; ++i) {
        const double covTerm = lambda.dot(covR[i]);
        const double curvTerm =
            lambda.dot(curvatureR(model, x, accel, frame[i]));
        term(i) = covTerm + curvTerm - (kappa1dot(s, 0) / k1) * rho(i) +
                  k1 * k1 * u(i);
      }
      profile.kappa2(s) = term.norm() / k1;
    }
  }

  fillStatistics(profile);
  return profile;
}

CurveClass classifyCurve(const CurvatureProfile& profile, double kappa1RelTol,
                         double kappa2Tol) {
  CurveClass cls;
  cls.kappa1Constant = profile.kappa1RelStd < kappa1RelTol;
  cls.kappa2Vanishing = profile.kappa2Max < kappa2Tol;
  return cls;
}

}  // namespace subriem
