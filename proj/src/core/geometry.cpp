#include "core/geometry.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace subriem {

namespace {

void requireFinite(const Vec& v, const char* what) {
  if (!v.allFinite()) {
    throw InputError(std::string(what) + " has non-finite entries");
  }
}

}  // namespace

Mat frameMatrix(const SubmersionModel& model, const Vec& x) {
  const int d = model.chartDim();
  const int m = model.manifoldDim();
  const int n = model.baseDim();
  Mat frame(d, d);
  for (int i = 0; i < n; ++i) frame.col(i) = model.horizontalField(x, i);
  for (int k = 0; k < m - n; ++k) frame.col(n + k) = model.verticalField(x, k);
  for (int j = 0; j < d - m; ++j) frame.col(m + j) = model.completionField(x, j);
  return frame;
}

Mat dualCoframe(const SubmersionModel& model, const Vec& x) {
  const Mat frame = frameMatrix(model, x);
  Eigen::FullPivLU<Mat> lu(frame);
  if (!lu.isInvertible()) {
    throw GeometryError("frame is degenerate at the requested point");
  }
  return lu.inverse();
}

Vec horizontalPairings(const SubmersionModel& model, const Vec& x,
                       const Vec& lambda) {
  requireFinite(x, "point");
  requireFinite(lambda, "covector");
  model.validatePoint(x);
  const int n = model.baseDim();
  Vec u(n);
  for (int i = 0; i < n; ++i) u(i) = lambda.dot(model.horizontalField(x, i));
  return u;
}

Vec sharp(const SubmersionModel& model, const Vec& x, const Vec& lambda) {
  const Vec u = horizontalPairings(model, x, lambda);
  Vec result = Vec::Zero(model.chartDim());
  for (int i = 0; i < model.baseDim(); ++i) {
    result += u(i) * model.horizontalField(x, i);
  }
  return result;
}

double hamiltonianEnergy(const SubmersionModel& model, const Vec& x,
                         const Vec& lambda) {
  return 0.5 * horizontalPairings(model, x, lambda).squaredNorm();
}

Vec bracket(const SubmersionModel& model, const Vec& x, int fieldIndexA,
            int fieldIndexB) {
  const int m = model.manifoldDim();
  if (fieldIndexA < 0 || fieldIndexA >= m || fieldIndexB < 0 ||
      fieldIndexB >= m) {
    throw InputError("bracket: frame index out of range");
  }
  model.validatePoint(x);
  return model.frameBracket(x, fieldIndexA, fieldIndexB);
}

Vec projectHorizontal(const SubmersionModel& model, const Vec& x, const Vec& v) {
  const Mat coframe = dualCoframe(model, x);
  const int n = model.baseDim();
  Vec result = Vec::Zero(model.chartDim());
  for (int i = 0; i < n; ++i) {
    result += coframe.row(i).dot(v) * model.horizontalField(x, i);
  }
  return result;
}

Vec projectVertical(const SubmersionModel& model, const Vec& x, const Vec& v) {
  const Mat coframe = dualCoframe(model, x);
  const int n = model.baseDim();
  const int vd = model.verticalDim();
  Vec result = Vec::Zero(model.chartDim());
  for (int k = 0; k < vd; ++k) {
    result += coframe.row(n + k).dot(v) * model.verticalField(x, k);
  }
  return result;
}

Vec horizontalCoefficients(const SubmersionModel& model, const Vec& x,
                           const Vec& v) {
  const Mat coframe = dualCoframe(model, x);
  return coframe.topRows(model.baseDim()) * v;
}

Vec verticalCoefficients(const SubmersionModel& model, const Vec& x,
                         const Vec& v) {
  const Mat coframe = dualCoframe(model, x);
  return coframe.middleRows(model.baseDim(), model.verticalDim()) * v;
}

Vec annihilatorToChart(const SubmersionModel& model, const Vec& x,
                       const Vec& coeffs) {
  if (coeffs.size() != model.verticalDim()) {
    throw InputError("annihilator coefficient count does not match the model");
  }
  const Mat coframe = dualCoframe(model, x);
  return coframe.middleRows(model.baseDim(), model.verticalDim()).transpose() *
         coeffs;
}

Vec horizontalCovector(const SubmersionModel& model, const Vec& x,
                       const Vec& components) {
  if (components.size() != model.baseDim()) {
    throw InputError("horizontal component count does not match the model");
  }
  const Mat coframe = dualCoframe(model, x);
  return coframe.topRows(model.baseDim()).transpose() * components;
}

Vec curvatureR(const SubmersionModel& model, const Vec& x, const Vec& v,
               const Vec& w) {
  // Freeze horizontal components: R(v, w) = sum_{i,j} v_i w_j R(X_i, X_j)
  // with R(X_i, X_j) = pr_V [X_i, X_j]. Freezing is exact because the
  // vertical projection kills the derivative terms of the bracket of
  // rescaled fields.
  const Mat coframe = dualCoframe(model, x);
  const int n = model.baseDim();
  const Vec vh = coframe.topRows(n) * v;
  const Vec wh = coframe.topRows(n) * w;
  Vec result = Vec::Zero(model.chartDim());
  for (int i = 0; i < n; ++i) {
    if (vh(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (wh(j) == 0.0) continue;
      result += vh(i) * wh(j) * model.frameBracket(x, i, j);
    }
  }
  // Vertical part only.
  const int vd = model.verticalDim();
  Vec vertical = Vec::Zero(model.chartDim());
  const Vec coeffs = coframe.middleRows(n, vd) * result;
  for (int k = 0; k < vd; ++k) {
    vertical += coeffs(k) * model.verticalField(x, k);
  }
  return vertical;
}

Mat jOperator(const SubmersionModel& model, const Vec& x,
              const Vec& alphaCoeffs) {
  if (alphaCoeffs.size() != model.verticalDim()) {
    throw InputError("J operator: alpha coefficient count does not match");
  }
  const int n = model.baseDim();
  const Mat coframe = dualCoframe(model, x);
  const Vec alphaChart =
      coframe.middleRows(n, model.verticalDim()).transpose() * alphaCoeffs;
  Mat J(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      // alpha annihilates D and the chart-normal directions, so pairing
      // with the full bracket equals pairing with its vertical part.
      const double value = alphaChart.dot(model.frameBracket(x, i, j));
      J(i, j) = value;
      J(j, i) = -value;
    }
  }
  return J;
}

Vec applyJ(const Mat& jMatrix, const Vec& v) { return jMatrix.transpose() * v; }

Vec baseComponentsInFrame(const SubmersionModel& model, const Vec& x,
                          const Vec& u) {
  const Mat dpi = model.projectionDifferential(x);
  const Mat gN = model.baseMetric(model.projectPoint(x));
  const int n = model.baseDim();
  Vec comps(n);
  for (int i = 0; i < n; ++i) {
    comps(i) = u.dot(gN * (dpi * model.horizontalField(x, i)));
  }
  return comps;
}

Vec horizontalLiftVector(const SubmersionModel& model, const Vec& x,
                         const Vec& u) {
  const Vec comps = baseComponentsInFrame(model, x, u);
  Vec lift = Vec::Zero(model.chartDim());
  for (int i = 0; i < model.baseDim(); ++i) {
    lift += comps(i) * model.horizontalField(x, i);
  }
  return lift;
}

}  // namespace subriem
