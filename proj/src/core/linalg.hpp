// Shared linear algebra aliases and small helpers.
#pragma once

#include <Eigen/Dense>

#include <vector>

namespace subriem {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Third-order array indexed as T[k](i, j). Used for Christoffel symbols
// Gamma^k_{ij} and for structure constants c^k_{ij}.
using Tensor3 = std::vector<Mat>;

inline Tensor3 zeroTensor3(int slices, int rows, int cols) {
  return Tensor3(slices, Mat::Zero(rows, cols));
}

}  // namespace subriem
