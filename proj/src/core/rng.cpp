#include "core/rng.hpp"

#include <cmath>

namespace subriem {

double Rng::normal() {
  if (hasSpare_) {
    hasSpare_ = false;
    return spare_;
  }
  // Box-Muller on two uniforms; u1 is kept away from zero so the log
  // is finite.
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  hasSpare_ = true;
  return r * std::cos(theta);
}

Vec Rng::normalVec(int n) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Vec Rng::unitVec(int n) {
  Vec v = normalVec(n);
  double norm = v.norm();
  while (norm < 1e-12) {
    v = normalVec(n);
    norm = v.norm();
  }
  return v / norm;
}

}  // namespace subriem
