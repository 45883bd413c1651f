// Built-in submersion models and the step-2 Carnot group factory.
//
// Built-ins:
//   heisenberg          m=3, n=2; frames X = dx - (y/2) dz, Y = dy + (x/2) dz.
//   product-heisenberg  m=6, n=4; two commuting Heisenberg blocks.
//   quaternionic-htype  m=7, n=4; structure constants from quaternion
//                       left multiplication; satisfies the H-type identity.
//   hopf                unit sphere in R^4 fibred over the radius-1/2
//                       sphere in R^3 by q -> (1/2) q i conj(q).
#pragma once

#include <string>
#include <vector>

#include "core/linalg.hpp"
#include "core/model.hpp"

namespace subriem {

// Structure constants c^k_{ij} of a step-2 stratified algebra:
// [X_i, X_j] = sum_k c^k_{ij} V_k. Stored as c[k](i, j).
struct StructureConstants {
  int n = 0;          // horizontal generators
  int verticalDim = 0;  // m - n
  Tensor3 c;

  // Throws InputError on shape or antisymmetry violations.
  void validateShape() const;

  // Coefficient vectors (c^1_{ij}, ..., c^{m-n}_{ij}) over all pairs
  // i < j, as columns of a (m-n) x n(n-1)/2 matrix.
  Mat pairMatrix() const;
};

// Carnot group in exponential coordinates (x_1..x_n, z_1..z_{m-n}) with
//   X_i = d_i - (1/2) sum_{j,k} c^k_{ij} x_j d_{z_k},   V_k = d_{z_k},
// which gives [X_i, X_j] = sum_k c^k_{ij} V_k exactly. Throws a
// construction error naming the deficient vertical directions when the
// constants are not bracket-generating, unless allowDegenerate is set
// (used to build the deliberately degenerate test model).
ModelPtr step2Carnot(const StructureConstants& constants,
                     const std::string& name = "step2-carnot",
                     bool allowDegenerate = false);

ModelPtr heisenberg();
ModelPtr productHeisenberg();
ModelPtr quaternionicHType();
ModelPtr hopf();

// Registry used by the CLI and the C API. Accepts canonical names and
// a few aliases; throws InputError for unknown names.
ModelPtr makeModel(const std::string& name);
std::vector<std::string> builtinModelNames();

}  // namespace subriem
