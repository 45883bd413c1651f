// Pointwise geometric primitives on a SubmersionModel: cometric sharp
// map, Hamiltonian energy, frame brackets, connection curvature R, and
// the J operator.
//
// Sign and basis conventions are collected in docs/conventions.md. The
// one that everything downstream inherits: for an annihilator covector
// alpha, the J operator matrix is
//
//   J_ij = alpha(R(X_i, X_j))  =  <J_alpha e_i, e_j>_gN,
//
// where e_i = dpi(X_i) is the pushed-forward orthonormal base frame.
// Consequently the action of J_alpha on a component vector v is J^T v.
#pragma once

#include "core/linalg.hpp"
#include "core/model.hpp"

namespace subriem {

// Full frame matrix [X_1..X_n | V_1..V_{m-n} | completion] with fields
// as columns; square of size chartDim.
Mat frameMatrix(const SubmersionModel& model, const Vec& x);

// Inverse-transpose bookkeeping for the dual coframe: row r of the
// returned matrix holds the chart components of the covector dual to
// frame field r (xi^i for horizontal rows, theta^k for vertical rows).
Mat dualCoframe(const SubmersionModel& model, const Vec& x);

// sharp^g: T*M -> D, lambda  |->  sum_i lambda(X_i) X_i.
Vec sharp(const SubmersionModel& model, const Vec& x, const Vec& lambda);

// Components lambda(X_i) of a covector against the horizontal frame.
Vec horizontalPairings(const SubmersionModel& model, const Vec& x,
                       const Vec& lambda);

// H(x, lambda) = (1/2) sum_i lambda(X_i(x))^2.
double hamiltonianEnergy(const SubmersionModel& model, const Vec& x,
                         const Vec& lambda);

// Lie bracket of frame fields; dispatches to the model's analytic
// structure or its finite-difference fallback.
Vec bracket(const SubmersionModel& model, const Vec& x, int fieldIndexA,
            int fieldIndexB);

// Connection curvature R(v, w) = pr_V [pr_D v, pr_D w]; inputs are
// arbitrary chart vectors and are projected to D first. Expanding in
// the frame, R(X_i, X_j) is the vertical part of [X_i, X_j], and the
// projections make the result bilinear in the frozen components.
Vec curvatureR(const SubmersionModel& model, const Vec& x, const Vec& v,
               const Vec& w);

// Horizontal/vertical projections of a chart vector and coefficient
// extraction against the coframes.
Vec projectHorizontal(const SubmersionModel& model, const Vec& x, const Vec& v);
Vec projectVertical(const SubmersionModel& model, const Vec& x, const Vec& v);
Vec horizontalCoefficients(const SubmersionModel& model, const Vec& x,
                           const Vec& v);  // xi^i(v), length n
Vec verticalCoefficients(const SubmersionModel& model, const Vec& x,
                         const Vec& v);  // theta^k(v), length m-n

// Chart covector of an annihilator element given by its coefficients
// b_k in the dual vertical coframe: sum_k b_k theta^k(x).
Vec annihilatorToChart(const SubmersionModel& model, const Vec& x,
                       const Vec& coeffs);

// Chart covector pairing to the given components on the horizontal
// frame and zero on the vertical frame: sum_i c_i xi^i(x).
Vec horizontalCovector(const SubmersionModel& model, const Vec& x,
                       const Vec& components);

// J operator of an annihilator covector (coefficients in the dual
// vertical coframe), as an n x n matrix in the dpi(X_i) basis. Skew
// w.r.t. g_N.
Mat jOperator(const SubmersionModel& model, const Vec& x, const Vec& alphaCoeffs);

// Applies the J matrix to a component vector: <J_alpha v, e_j> = (J^T v)_j.
Vec applyJ(const Mat& jMatrix, const Vec& v);

// Components <u, dpi(X_i)>_gN of a base chart vector against the
// pushed-forward horizontal frame at x (over y = pi(x)).
Vec baseComponentsInFrame(const SubmersionModel& model, const Vec& x,
                          const Vec& u);

// Horizontal lift of a base chart vector u at x: the unique vector of
// D_x with dpi-image u; computed as sum_i <u, dpi X_i>_gN X_i.
Vec horizontalLiftVector(const SubmersionModel& model, const Vec& x,
                         const Vec& u);

}  // namespace subriem
