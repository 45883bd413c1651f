// Built-in submersion models.
#include "core/models.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace subriem {

namespace {

constexpr double kShapeTol = 1e-14;

}  // namespace

void StructureConstants::validateShape() const {
  if (n < 1 || verticalDim < 1) {
    throw InputError("structure constants need n >= 1 and m - n >= 1");
  }
  if (static_cast<int>(c.size()) != verticalDim) {
    throw InputError("structure constants hold " + std::to_string(c.size()) +
                     " slices, expected " + std::to_string(verticalDim));
  }
  for (int k = 0; k < verticalDim; ++k) {
    if (c[k].rows() != n || c[k].cols() != n) {
      throw InputError("structure constant slice " + std::to_string(k + 1) +
                       " is not " + std::to_string(n) + "x" + std::to_string(n));
    }
    const double skew = (c[k] + c[k].transpose()).cwiseAbs().maxCoeff();
    if (skew > kShapeTol) {
      throw InputError("structure constant slice " + std::to_string(k + 1) +
                       " is not antisymmetric (defect " + std::to_string(skew) + ")");
    }
  }
}

Mat StructureConstants::pairMatrix() const {
  const int pairs = n * (n - 1) / 2;
  Mat out = Mat::Zero(verticalDim, pairs);
  int col = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++col) {
      for (int k = 0; k < verticalDim; ++k) {
        out(k, col) = c[k](i, j);
      }
    }
  }
  return out;
}

namespace {

// Carnot group of step 2 in exponential coordinates (x, z). The frame
//   X_i = d_i - (1/2) sum_{j,k} c^k_{ij} x_j d_{z_k}
// satisfies [X_i, X_j] = sum_k c^k_{ij} V_k with V_k = d_{z_k}.
class Step2CarnotModel final : public SubmersionModel {
 public:
  Step2CarnotModel(StructureConstants constants, std::string name)
      : constants_(std::move(constants)), name_(std::move(name)) {}

  std::string name() const override { return name_; }
  int manifoldDim() const override { return constants_.n + constants_.verticalDim; }
  int baseDim() const override { return constants_.n; }

  Vec horizontalField(const Vec& x, int i) const override {
    requireChartPoint(x);
    requireIndex(i, baseDim(), "horizontal index");
    const int n = baseDim();
    Vec field = Vec::Zero(manifoldDim());
    field(i) = 1.0;
    for (int k = 0; k < constants_.verticalDim; ++k) {
      field(n + k) = -0.5 * constants_.c[k].row(i).dot(x.head(n));
    }
    return field;
  }

  Vec verticalField(const Vec& x, int k) const override {
    requireChartPoint(x);
    requireIndex(k, verticalDim(), "vertical index");
    return Vec::Unit(manifoldDim(), baseDim() + k);
  }

  Vec projectPoint(const Vec& x) const override {
    requireChartPoint(x);
    return x.head(baseDim());
  }

  Mat projectionDifferential(const Vec& x) const override {
    requireChartPoint(x);
    Mat diff = Mat::Zero(baseDim(), manifoldDim());
    diff.leftCols(baseDim()).setIdentity();
    return diff;
  }

  Vec frameBracket(const Vec& x, int a, int b) const override {
    requireChartPoint(x);
    requireIndex(a, manifoldDim(), "bracket index");
    requireIndex(b, manifoldDim(), "bracket index");
    const int n = baseDim();
    Vec out = Vec::Zero(manifoldDim());
    if (a < n && b < n) {
      for (int k = 0; k < constants_.verticalDim; ++k) {
        out(n + k) = constants_.c[k](a, b);
      }
    }
    return out;
  }

  bool constantCurvatureCoefficients() const override { return true; }

  Mat fieldJacobian(const Vec& x, int idx) const override {
    requireChartPoint(x);
    requireIndex(idx, manifoldDim(), "field index");
    const int n = baseDim();
    Mat jac = Mat::Zero(manifoldDim(), manifoldDim());
    if (idx < n) {
      for (int k = 0; k < constants_.verticalDim; ++k) {
        for (int j = 0; j < n; ++j) {
          jac(n + k, j) = -0.5 * constants_.c[k](idx, j);
        }
      }
    }
    return jac;
  }

  Vec samplePoint(Rng& rng) const override {
    Vec x(manifoldDim());
    for (int i = 0; i < x.size(); ++i) {
      x(i) = rng.uniform(-1.0, 1.0);
    }
    return x;
  }

  Vec liftBasePoint(const Vec& y) const override {
    if (y.size() != baseDim()) {
      throw InputError("base point has dimension " + std::to_string(y.size()) +
                       ", expected " + std::to_string(baseDim()));
    }
    Vec x = Vec::Zero(manifoldDim());
    x.head(baseDim()) = y;
    return x;
  }

  const StructureConstants& constants() const { return constants_; }

 private:
  void requireChartPoint(const Vec& x) const {
    if (x.size() != manifoldDim()) {
      throw InputError("chart point has dimension " + std::to_string(x.size()) +
                       ", expected " + std::to_string(manifoldDim()));
    }
  }

  static void requireIndex(int idx, int bound, const char* what) {
    if (idx < 0 || idx >= bound) {
      throw InputError(std::string(what) + " " + std::to_string(idx) +
                       " out of range [0, " + std::to_string(bound) + ")");
    }
  }

  StructureConstants constants_;
  std::string name_;
};

// Quaternion helpers for the sphere model. Components (q0, q1, q2, q3)
// stand for q0 + q1 i + q2 j + q3 k.
Eigen::Vector4d qmul(const Eigen::Vector4d& p, const Eigen::Vector4d& q) {
  return Eigen::Vector4d(
      p(0) * q(0) - p(1) * q(1) - p(2) * q(2) - p(3) * q(3),
      p(0) * q(1) + p(1) * q(0) + p(2) * q(3) - p(3) * q(2),
      p(0) * q(2) - p(1) * q(3) + p(2) * q(0) + p(3) * q(1),
      p(0) * q(3) + p(1) * q(2) - p(2) * q(1) + p(3) * q(0));
}

Eigen::Vector4d qconj(const Eigen::Vector4d& q) {
  return Eigen::Vector4d(q(0), -q(1), -q(2), -q(3));
}

// Matrix of w -> w * a.
Eigen::Matrix4d rightMultMatrix(const Eigen::Vector4d& a) {
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    m.col(r) = qmul(Eigen::Vector4d::Unit(r), a);
  }
  return m;
}

const Eigen::Vector4d kQuatI(0.0, 1.0, 0.0, 0.0);
const Eigen::Vector4d kQuatJ(0.0, 0.0, 1.0, 0.0);
const Eigen::Vector4d kQuatK(0.0, 0.0, 0.0, 1.0);

// Unit sphere in R^4 fibred over the sphere of radius 1/2 in R^3 by
// pi(q) = (1/2) q i conj(q). Frame fields are right translations
// X_1 = q j, X_2 = q k, V = q i; the chart completion is the outward
// normal q itself, so the frame matrix is orthogonal on the sphere.
class HopfModel final : public SubmersionModel {
 public:
  std::string name() const override { return "hopf"; }
  int manifoldDim() const override { return 3; }
  int baseDim() const override { return 2; }
  int chartDim() const override { return 4; }
  int baseChartDim() const override { return 3; }

  Vec horizontalField(const Vec& x, int i) const override {
    requireIndex(i, 2, "horizontal index");
    return fieldByUnit(x, i == 0 ? kQuatJ : kQuatK);
  }

  Vec verticalField(const Vec& x, int k) const override {
    requireIndex(k, 1, "vertical index");
    return fieldByUnit(x, kQuatI);
  }

  Vec completionField(const Vec& x, int j) const override {
    requireIndex(j, 1, "completion index");
    requireChartPoint(x);
    return x;
  }

  Vec projectPoint(const Vec& x) const override {
    requireChartPoint(x);
    const Eigen::Vector4d q = x.head<4>();
    const Eigen::Vector4d p = qmul(qmul(q, kQuatI), qconj(q));
    return 0.5 * p.tail<3>();
  }

  Mat projectionDifferential(const Vec& x) const override {
    requireChartPoint(x);
    const Eigen::Vector4d q = x.head<4>();
    Mat diff(3, 4);
    for (int r = 0; r < 4; ++r) {
      const Eigen::Vector4d col =
          qmul(qmul(Eigen::Vector4d::Unit(r), kQuatI), qconj(q));
      diff.col(r) = col.tail<3>();
    }
    return diff;
  }

  Mat baseMetric(const Vec& y) const override {
    requireBasePoint(y);
    return Mat::Identity(3, 3);
  }

  // Ambient-coordinate Christoffels of the embedded sphere:
  // Gamma^k_{ij}(y) = y^k delta_{ij} / |y|^2.
  Tensor3 baseChristoffels(const Vec& y) const override {
    requireBasePoint(y);
    const double r2 = y.squaredNorm();
    if (r2 < 1e-18) {
      throw GeometryError("base chart point at the origin has no tangent sphere");
    }
    Tensor3 gamma = zeroTensor3(3, 3, 3);
    for (int k = 0; k < 3; ++k) {
      gamma[k] = (y(k) / r2) * Mat::Identity(3, 3);
    }
    return gamma;
  }

  CurvatureOperator baseCurvatureOp() const override {
    return [](const Vec& u, const Vec& v, const Vec& w) -> Vec {
      const double kGauss = 4.0;
      return kGauss * (v.dot(w) * u - u.dot(w) * v);
    };
  }

  Vec frameBracket(const Vec& x, int a, int b) const override {
    requireChartPoint(x);
    requireIndex(a, 3, "bracket index");
    requireIndex(b, 3, "bracket index");
    const Eigen::Vector4d q = x.head<4>();
    const Eigen::Vector4d ua = frameUnit(a);
    const Eigen::Vector4d ub = frameUnit(b);
    return qmul(q, qmul(ua, ub) - qmul(ub, ua));
  }

  Mat fieldJacobian(const Vec& x, int idx) const override {
    requireChartPoint(x);
    requireIndex(idx, 3, "field index");
    return rightMultMatrix(frameUnit(idx));
  }

  bool constantCurvatureCoefficients() const override { return true; }

  void validatePoint(const Vec& x) const override {
    requireChartPoint(x);
    const double offSphere = std::abs(x.norm() - 1.0);
    if (offSphere > 1e-9) {
      throw GeometryError("point is off the unit sphere by " +
                          std::to_string(offSphere));
    }
  }

  Vec samplePoint(Rng& rng) const override { return rng.unitVec(4); }

  Vec liftBasePoint(const Vec& y) const override {
    requireBasePoint(y);
    if (std::abs(y.norm() - 0.5) > 1e-9) {
      throw InputError("base point is off the radius-1/2 sphere by " +
                       std::to_string(std::abs(y.norm() - 0.5)));
    }
    const Vec u = 2.0 * y;
    // Shortest-arc rotation taking i to u: q = normalize(1 - u i),
    // degenerate only at u = -i where q = j works.
    Eigen::Vector4d q(1.0 + u(0), 0.0, -u(2), u(1));
    const double norm = q.norm();
    if (norm < 1e-6) {
      return Vec(kQuatJ);
    }
    return Vec(q / norm);
  }

 private:
  static Eigen::Vector4d frameUnit(int idx) {
    switch (idx) {
      case 0: return kQuatJ;
      case 1: return kQuatK;
      default: return kQuatI;
    }
  }

  Vec fieldByUnit(const Vec& x, const Eigen::Vector4d& unit) const {
    requireChartPoint(x);
    return qmul(x.head<4>(), unit);
  }

  void requireChartPoint(const Vec& x) const {
    if (x.size() != 4) {
      throw InputError("chart point has dimension " + std::to_string(x.size()) +
                       ", expected 4");
    }
    if (!x.allFinite()) {
      throw InputError("chart point has non-finite entries");
    }
  }

  void requireBasePoint(const Vec& y) const {
    if (y.size() != 3) {
      throw InputError("base chart point has dimension " +
                       std::to_string(y.size()) + ", expected 3");
    }
  }

  static int requireIndex(int idx, int bound, const char* what) {
    if (idx < 0 || idx >= bound) {
      throw InputError(std::string(what) + " " + std::to_string(idx) +
                       " out of range [0, " + std::to_string(bound) + ")");
    }
    return idx;
  }
};

StructureConstants heisenbergConstants() {
  StructureConstants sc;
  sc.n = 2;
  sc.verticalDim = 1;
  sc.c = zeroTensor3(1, 2, 2);
  sc.c[0](0, 1) = 1.0;
  sc.c[0](1, 0) = -1.0;
  return sc;
}

StructureConstants productHeisenbergConstants() {
  StructureConstants sc;
  sc.n = 4;
  sc.verticalDim = 2;
  sc.c = zeroTensor3(2, 4, 4);
  sc.c[0](0, 1) = 1.0;
  sc.c[0](1, 0) = -1.0;
  sc.c[1](2, 3) = 1.0;
  sc.c[1](3, 2) = -1.0;
  return sc;
}

// Constants of the quaternionic H-type algebra: the three slices are the
// actions of right multiplication by i, j, k on R^4 = H, so the induced
// operators square to -Id and pairwise anticommute.
StructureConstants quaternionicConstants() {
  StructureConstants sc;
  sc.n = 4;
  sc.verticalDim = 3;
  sc.c = zeroTensor3(3, 4, 4);
  auto setPair = [&sc](int k, int i, int j, double value) {
    sc.c[k](i, j) = value;
    sc.c[k](j, i) = -value;
  };
  setPair(0, 0, 1, 1.0);
  setPair(0, 2, 3, 1.0);
  setPair(1, 0, 2, 1.0);
  setPair(1, 1, 3, -1.0);
  setPair(2, 0, 3, 1.0);
  setPair(2, 1, 2, 1.0);
  return sc;
}

}  // namespace

ModelPtr step2Carnot(const StructureConstants& constants,
                     const std::string& name, bool allowDegenerate) {
  constants.validateShape();
  if (!allowDegenerate) {
    const Mat pairs = constants.pairMatrix();
    Eigen::JacobiSVD<Mat> svd(pairs, Eigen::ComputeFullU);
    const double scale = pairs.size() > 0 ? svd.singularValues().maxCoeff() : 0.0;
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i) {
      if (svd.singularValues()(i) > 1e-12 * std::max(1.0, scale)) {
        ++rank;
      }
    }
    if (rank < constants.verticalDim) {
      std::ostringstream msg;
      msg << "structure constants are not bracket-generating; "
          << "deficient vertical directions:";
      for (int col = rank; col < constants.verticalDim; ++col) {
        msg << " (";
        for (int k = 0; k < constants.verticalDim; ++k) {
          msg << (k > 0 ? ", " : "") << svd.matrixU()(k, col);
        }
        msg << ")";
      }
      throw InputError(msg.str());
    }
  }
  return std::make_shared<Step2CarnotModel>(constants, name);
}

ModelPtr heisenberg() { return step2Carnot(heisenbergConstants(), "heisenberg"); }

ModelPtr productHeisenberg() {
  return step2Carnot(productHeisenbergConstants(), "product-heisenberg");
}

ModelPtr quaternionicHType() {
  return step2Carnot(quaternionicConstants(), "quaternionic-htype");
}

ModelPtr hopf() { return std::make_shared<HopfModel>(); }

ModelPtr makeModel(const std::string& name) {
  if (name == "heisenberg") {
    return heisenberg();
  }
  if (name == "product-heisenberg" || name == "productheisenberg" ||
      name == "product_heisenberg") {
    return productHeisenberg();
  }
  if (name == "quaternionic-htype" || name == "quaternionic" ||
      name == "quaternionic_htype") {
    return quaternionicHType();
  }
  if (name == "hopf") {
    return hopf();
  }
  throw InputError("unknown model '" + name + "'; known models: heisenberg, "
                   "product-heisenberg, quaternionic-htype, hopf");
}

std::vector<std::string> builtinModelNames() {
  return {"heisenberg", "product-heisenberg", "quaternionic-htype", "hopf"};
}

}  // namespace subriem
