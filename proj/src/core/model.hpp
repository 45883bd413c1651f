// SubmersionModel: analytic description of a submersion pi: M -> N
// carrying a sub-Riemannian structure on M. The horizontal frame
// X_1..X_n is orthonormal for the metric on the horizontal bundle D and
// pushes forward to a g_N-orthonormal frame on N; the vertical frame
// V_1..V_{m-n} spans ker(dpi).
//
// Models work in a single global chart. For embedded manifolds the
// chart may have more coordinates than the manifold has dimensions
// (the unit-sphere model uses the ambient R^4); in that case the model
// supplies completion fields spanning the chart-normal directions so
// that frames can be inverted to coframes.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "core/linalg.hpp"
#include "core/rng.hpp"

namespace subriem {

enum class BracketMode { Analytic, FiniteDifference };

// Riemannian curvature operator (u, v, w) -> R(u, v)w in base chart
// coordinates, available for models whose base curvature is known in
// closed form.
using CurvatureOperator = std::function<Vec(const Vec&, const Vec&, const Vec&)>;

class SubmersionModel {
 public:
  virtual ~SubmersionModel() = default;

  virtual std::string name() const = 0;

  // Dimensions: m = dim M, n = dim N, m > n >= 2.
  virtual int manifoldDim() const = 0;
  virtual int baseDim() const = 0;
  int verticalDim() const { return manifoldDim() - baseDim(); }

  // Chart dimensions; equal to the manifold dimensions except for
  // embedded models.
  virtual int chartDim() const { return manifoldDim(); }
  virtual int baseChartDim() const { return baseDim(); }

  // Frame fields in chart coordinates. Indices: i in [0, n) for the
  // horizontal frame, k in [0, m-n) for the vertical frame, j in
  // [0, chartDim - m) for the chart-normal completion.
  virtual Vec horizontalField(const Vec& x, int i) const = 0;
  virtual Vec verticalField(const Vec& x, int k) const = 0;
  virtual Vec completionField(const Vec& x, int j) const;

  // Submersion and its differential (baseChartDim x chartDim).
  virtual Vec projectPoint(const Vec& x) const = 0;
  virtual Mat projectionDifferential(const Vec& x) const = 0;

  // Base Riemannian data in base chart coordinates. Defaults describe
  // a Euclidean base.
  virtual Mat baseMetric(const Vec& y) const;
  virtual Tensor3 baseChristoffels(const Vec& y) const;

  // Base curvature operator, when known analytically.
  virtual CurvatureOperator baseCurvatureOp() const;

  virtual BracketMode bracketMode() const { return BracketMode::Analytic; }

  // Whether the vertical coefficients theta^k([X_i, X_j]) are constant
  // over the chart. Lets the extended flow assemble exact Jacobians of
  // the curvature fields instead of differencing them.
  virtual bool constantCurvatureCoefficients() const { return false; }

  // Lie bracket [E_a, E_b](x) of frame fields, indexed over the full
  // m-frame: 0..n-1 horizontal, n..m-1 vertical. Models with analytic
  // structure override this; the base implementation differentiates
  // the frames by central finite differences.
  virtual Vec frameBracket(const Vec& x, int a, int b) const;

  // Jacobian of a frame field (chartDim x chartDim), same indexing as
  // frameBracket. The base implementation is a central finite
  // difference; models whose fields are linear in x override it with
  // the exact constant matrix.
  virtual Mat fieldJacobian(const Vec& x, int fieldIndex) const;

  // Rejects points outside the working chart (e.g. off the unit
  // sphere). Default accepts all finite points.
  virtual void validatePoint(const Vec& x) const;

  // Random point in the working chart, for probe sampling.
  virtual Vec samplePoint(Rng& rng) const = 0;

  // A point of M over the given base point (a section of pi).
  virtual Vec liftBasePoint(const Vec& y) const = 0;

  // Evaluates a frame field by full-frame index, including completion
  // fields: [0, n) horizontal, [n, m) vertical, [m, chartDim) normal.
  Vec frameField(const Vec& x, int fieldIndex) const;

 protected:
  // Step used by the finite-difference bracket and Jacobian fallbacks.
  static constexpr double kFdStep = 1e-5;
};

using ModelPtr = std::shared_ptr<const SubmersionModel>;

// Result of the model invariant suite: largest residuals observed over
// the sampled points.
struct ModelInvariantResult {
  double orthonormalityResidual = 0.0;  // |<dpi X_i, dpi X_j>_gN - delta_ij|
  double verticalityResidual = 0.0;     // |dpi V_k|
  double independenceResidual = 0.0;    // deficiency of the frame matrix
  double coframeResidual = 0.0;         // |theta^k(X_i)| and duality defects
  double bracketResidual = 0.0;         // analytic vs finite-difference brackets
  bool pass = false;
};

// Validates a model at `samples` random points: pushed-forward
// horizontal frames orthonormal w.r.t. g_N, vertical frames in
// ker(dpi), full frame invertible, dual coframe consistent, analytic
// brackets matching finite differences.
ModelInvariantResult runModelInvariantSuite(const SubmersionModel& model,
                                            int samples = 100,
                                            std::uint64_t seed = kDefaultSeed);

}  // namespace subriem
