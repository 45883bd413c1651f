#include "core/model.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/geometry.hpp"

namespace subriem {

Vec SubmersionModel::completionField(const Vec&, int) const {
  throw GeometryError("model has no chart-normal completion fields");
}

Mat SubmersionModel::baseMetric(const Vec&) const {
  return Mat::Identity(baseChartDim(), baseChartDim());
}

Tensor3 SubmersionModel::baseChristoffels(const Vec&) const {
  const int d = baseChartDim();
  return zeroTensor3(d, d, d);
}

CurvatureOperator SubmersionModel::baseCurvatureOp() const {
  const int d = baseChartDim();
  return [d](const Vec&, const Vec&, const Vec&) { return Vec::Zero(d); };
}

void SubmersionModel::validatePoint(const Vec& x) const {
  if (!x.allFinite()) throw InputError("point has non-finite entries");
  if (x.size() != chartDim()) throw InputError("point dimension mismatch");
}

Vec SubmersionModel::frameField(const Vec& x, int fieldIndex) const {
  const int n = baseDim();
  const int m = manifoldDim();
  if (fieldIndex < 0 || fieldIndex >= chartDim()) {
    throw InputError("frame field index out of range");
  }
  if (fieldIndex < n) return horizontalField(x, fieldIndex);
  if (fieldIndex < m) return verticalField(x, fieldIndex - n);
  return completionField(x, fieldIndex - m);
}

Vec SubmersionModel::frameBracket(const Vec& x, int a, int b) const {
  // [A, B] = (DB) A - (DA) B with the Jacobians evaluated at x.
  const Mat ja = fieldJacobian(x, a);
  const Mat jb = fieldJacobian(x, b);
  return jb * frameField(x, a) - ja * frameField(x, b);
}

Mat SubmersionModel::fieldJacobian(const Vec& x, int fieldIndex) const {
  const int d = chartDim();
  Mat jac(d, d);
  const double h = kFdStep;
  if (h <= 0.0) throw NumericError("finite-difference step underflow");
  Vec xp = x;
  Vec xm = x;
  for (int c = 0; c < d; ++c) {
    xp(c) = x(c) + h;
    xm(c) = x(c) - h;
    jac.col(c) = (frameField(xp, fieldIndex) - frameField(xm, fieldIndex)) /
                 (2.0 * h);
    xp(c) = x(c);
    xm(c) = x(c);
  }
  return jac;
}

ModelInvariantResult runModelInvariantSuite(const SubmersionModel& model,
                                            int samples, std::uint64_t seed) {
  Rng rng(seed);
  ModelInvariantResult result;
  const int n = model.baseDim();
  const int m = model.manifoldDim();
  const int d = model.chartDim();

  for (int s = 0; s < samples; ++s) {
    const Vec x = model.samplePoint(rng);
    const Vec y = model.projectPoint(x);
    const Mat dpi = model.projectionDifferential(x);
    const Mat gN = model.baseMetric(y);

    // Pushed-forward horizontal frame orthonormal w.r.t. g_N.
    for (int i = 0; i < n; ++i) {
      const Vec ei = dpi * model.horizontalField(x, i);
      for (int j = i; j < n; ++j) {
        const Vec ej = dpi * model.horizontalField(x, j);
        const double expected = (i == j) ? 1.0 : 0.0;
        result.orthonormalityResidual =
            std::max(result.orthonormalityResidual,
                     std::abs(ei.dot(gN * ej) - expected));
      }
    }

    // Vertical frame in the kernel of dpi.
    for (int k = 0; k < m - n; ++k) {
      result.verticalityResidual =
          std::max(result.verticalityResidual,
                   (dpi * model.verticalField(x, k)).norm());
    }

    // Full frame invertibility, measured by the smallest singular value.
    const Mat frame = frameMatrix(model, x);
    const Eigen::JacobiSVD<Mat> svd(frame);
    const double smin = svd.singularValues()(d - 1);
    result.independenceResidual =
        std::max(result.independenceResidual, smin < 1e-8 ? 1.0 : 0.0);

    // Dual coframe annihilation and duality defects.
    const Mat coframe = dualCoframe(model, x);
    const Mat duality = coframe * frame - Mat::Identity(d, d);
    result.coframeResidual = std::max(
        result.coframeResidual, duality.cwiseAbs().maxCoeff());

    // Analytic brackets against a finite-difference baseline. Qualified
    // calls force the central-difference Jacobians even when the model
    // overrides fieldJacobian with exact ones.
    if (model.bracketMode() == BracketMode::Analytic && s < 10) {
      for (int a = 0; a < m; ++a) {
        for (int b = a + 1; b < m; ++b) {
          const Vec analytic = model.frameBracket(x, a, b);
          const Mat ja = model.SubmersionModel::fieldJacobian(x, a);
          const Mat jb = model.SubmersionModel::fieldJacobian(x, b);
          const Vec fd = jb * model.frameField(x, a) - ja * model.frameField(x, b);
          result.bracketResidual =
              std::max(result.bracketResidual, (analytic - fd).norm());
        }
      }
    }
  }

  result.pass = result.orthonormalityResidual < 1e-10 &&
                result.verticalityResidual < 1e-10 &&
                result.independenceResidual < 1.0 &&
                result.coframeResidual < 1e-10 &&
                result.bracketResidual < 1e-7;
  return result;
}

}  // namespace subriem
