#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core/criteria.hpp"
#include "core/errors.hpp"
#include "core/models.hpp"
#include "core/rng.hpp"

namespace {

using namespace subriem;

// Two commuting generators with no bracket: the vertical direction is
// not generated, so the extension degenerates there.
ModelPtr degenerateModel() {
  StructureConstants constants;
  constants.n = 2;
  constants.verticalDim = 1;
  constants.c = zeroTensor3(1, 2, 2);
  return step2Carnot(constants, "degenerate", true);
}

// Three generators whose single curvature matrix A has -A^2 with
// off-diagonal mass exactly 2. Bracket-generating, so the factory
// accepts it without the degenerate escape hatch.
ModelPtr nonDiagonalModel() {
  StructureConstants constants;
  constants.n = 3;
  constants.verticalDim = 1;
  constants.c = zeroTensor3(1, 3, 3);
  constants.c[0](0, 1) = 1.0;
  constants.c[0](1, 0) = -1.0;
  constants.c[0](0, 2) = 1.0;
  constants.c[0](2, 0) = -1.0;
  return step2Carnot(constants, "non-diagonal");
}

Vec makeVec(std::initializer_list<double> entries) {
  Vec out(static_cast<int>(entries.size()));
  int i = 0;
  for (double e : entries) {
    out(i++) = e;
  }
  return out;
}

}  // namespace

TEST_SUITE("criteria") {

TEST_CASE("squared J identity holds exactly on H-type models") {
  Rng rng(kDefaultSeed);
  for (const std::string name :
       {"heisenberg", "quaternionic-htype", "hopf"}) {
    const ModelPtr model = makeModel(name);
    for (int trial = 0; trial < 5; ++trial) {
      const Vec x = model->samplePoint(rng);
      const Vec alpha = rng.unitVec(model->verticalDim());
      const Vec v = rng.unitVec(model->baseDim());
      INFO("model " << name);
      CHECK(jSquaredResidual(*model, x, alpha, v) < 1e-12);
    }
  }
}

TEST_CASE("squared J residual on the product model matches hand values") {
  const ModelPtr model = productHeisenberg();
  const Vec x = Vec::Zero(6);
  const Vec v = makeVec({1, 0, 1, 0});
  CHECK(jSquaredResidual(*model, x, makeVec({1, 2}), v) ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK(jSquaredResidual(*model, x, makeVec({1, 0}), v) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("J orthogonality residual matches hand values") {
  const ModelPtr model = productHeisenberg();
  const Vec x = Vec::Zero(6);
  const Vec v = makeVec({1, 0, 1, 0});
  const Vec w = makeVec({1, 0, -1, 0});
  CHECK(jOrthogonalityResidual(*model, x, makeVec({1, 2}), v, w) ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK(jOrthogonalityResidual(*model, x, makeVec({1, 0}), v, w) ==
        doctest::Approx(0.5).epsilon(1e-12));
  // w parallel to v leaves no admissible direction.
  CHECK(jOrthogonalityResidual(*model, x, makeVec({1, 2}), v, v) == 0.0);
}

TEST_CASE("J orthogonality holds on the quaternionic model") {
  const ModelPtr model = quaternionicHType();
  Rng rng(kDefaultSeed);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec x = model->samplePoint(rng);
    const Vec alpha = rng.unitVec(3);
    const Vec v = rng.unitVec(4);
    const Vec w = rng.unitVec(4);
    CHECK(jOrthogonalityResidual(*model, x, alpha, v, w) < 1e-12);
  }
}

TEST_CASE("H-type residuals separate the built-ins from the product") {
  Rng rng(kDefaultSeed);
  for (const std::string name :
       {"heisenberg", "quaternionic-htype", "hopf"}) {
    const ModelPtr model = makeModel(name);
    const Vec x = model->samplePoint(rng);
    const Vec alpha = rng.unitVec(model->verticalDim());
    const Vec beta = rng.unitVec(model->verticalDim());
    const auto [square, polarized] = hTypeResiduals(*model, x, alpha, beta);
    INFO("model " << name);
    CHECK(square < 1e-12);
    CHECK(polarized < 1e-12);
  }

  const ModelPtr product = productHeisenberg();
  const auto [square, polarized] = hTypeResiduals(
      *product, Vec(Vec::Zero(6)), makeVec({1, 0}), makeVec({0, 1}));
  CHECK(square == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(polarized == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("normalization identity holds on every built-in") {
  Rng rng(kDefaultSeed);
  for (const std::string& name : builtinModelNames()) {
    const ModelPtr model = makeModel(name);
    for (int trial = 0; trial < 3; ++trial) {
      const Vec x = model->samplePoint(rng);
      const Vec alpha = rng.normalVec(model->verticalDim());
      INFO("model " << name);
      CHECK(normalizationResidual(*model, x, alpha) < 1e-12);
    }
  }
}

TEST_CASE("coframe curvature matrices are diagonal on built-ins only") {
  Rng rng(kDefaultSeed);
  for (const std::string& name : builtinModelNames()) {
    const ModelPtr model = makeModel(name);
    const Vec x = model->samplePoint(rng);
    INFO("model " << name);
    CHECK(coframeDiagonalResidual(*model, x) < 1e-10);
  }

  const ModelPtr skewed = nonDiagonalModel();
  CHECK(coframeDiagonalResidual(*skewed, Vec(Vec::Zero(4))) ==
        doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("curvature square identity on the round base") {
  const ModelPtr model = hopf();
  const CurvatureOperator op = model->baseCurvatureOp();
  const Vec y = makeVec({0.3, 0.0, 0.4});
  const Mat gN = model->baseMetric(y);
  const Vec u = makeVec({-0.8, 0.0, 0.6});
  const Vec v = makeVec({0.0, 1.0, 0.0});
  CHECK(curvatureSquareResidual(op, gN, u, v, u) < 1e-12);
  CHECK(curvatureSquareResidual(op, gN, u, v, Vec(u + v)) < 1e-12);

  const CurvatureOperator broken = [](const Vec&, const Vec&, const Vec& w) {
    return w;
  };
  const Mat id3 = Mat::Identity(3, 3);
  CHECK(curvatureSquareResidual(broken, id3, makeVec({1, 0, 0}),
                                makeVec({0, 1, 0}), makeVec({0, 0, 1})) ==
        doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(
      curvatureSquareResidual(broken, id3, Vec(Vec::Zero(3)),
                              makeVec({0, 1, 0}), makeVec({0, 0, 1})),
      InputError);
}

TEST_CASE("kappa1 derivative residual vanishes on constant-curvature models") {
  Rng rng(kDefaultSeed);
  for (const std::string name : {"heisenberg", "quaternionic-htype"}) {
    const ModelPtr model = makeModel(name);
    for (int trial = 0; trial < 3; ++trial) {
      const Vec x = model->samplePoint(rng);
      const Vec alpha = rng.unitVec(model->verticalDim());
      const Vec v = rng.unitVec(model->baseDim());
      INFO("model " << name);
      CHECK(kappaDerivativeResidual(*model, x, alpha, v) < 1e-9);
    }
  }
}

TEST_CASE("step-2 decomposition rank and kernel witness") {
  const ModelPtr heis = heisenberg();
  Vec witness;
  CHECK(step2DecompositionRank(*heis, Vec(Vec::Zero(3)), &witness) == 3);
  CHECK(witness.size() == 0);

  const ModelPtr degenerate = degenerateModel();
  CHECK(step2DecompositionRank(*degenerate, Vec(Vec::Zero(3)), &witness) == 2);
  REQUIRE(witness.size() == 3);
  CHECK(std::abs(witness.norm() - 1.0) < 1e-12);
  // The missing direction is the vertical one.
  CHECK(std::abs(witness(0)) < 1e-12);
  CHECK(std::abs(witness(1)) < 1e-12);
  CHECK(std::abs(std::abs(witness(2)) - 1.0) < 1e-12);
}

TEST_CASE("non-degeneracy eigenvalue detects the degenerate extension") {
  const ModelPtr heis = heisenberg();
  CHECK(nondegeneracyMinEigenvalue(*heis, Vec(Vec::Zero(3))) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const ModelPtr degenerate = degenerateModel();
  CHECK(std::abs(nondegeneracyMinEigenvalue(*degenerate, Vec(Vec::Zero(3)))) <
        1e-12);
}

TEST_CASE("check driver validates names and honors sample overrides") {
  const ModelPtr model = heisenberg();
  CheckOptions opts;
  CHECK_THROWS_AS(runCheck(*model, "no-such-check", opts), InputError);
  // Trajectory checks are applied per initial condition by experiment
  // runs, not by the model-level driver.
  CHECK_THROWS_AS(runCheck(*model, "constant-kappa1", opts), InputError);

  opts.samples = 7;
  const CheckReport report = runCheck(*model, "j-squared", opts);
  CHECK(report.name == "j-squared");
  CHECK(report.samples == 7);
  CHECK(report.tolerance == opts.tolAlgebraic);
  CHECK(report.pass);
}

TEST_CASE("check driver is deterministic for a fixed seed") {
  const ModelPtr model = quaternionicHType();
  CheckOptions opts;
  opts.samples = 20;
  opts.seed = 42;
  const CheckReport first = runCheck(*model, "htype-identity", opts);
  const CheckReport second = runCheck(*model, "htype-identity", opts);
  CHECK(first.maxResidual == second.maxResidual);
  REQUIRE(first.witnesses.size() == second.witnesses.size());
  for (std::size_t i = 0; i < first.witnesses.size(); ++i) {
    CHECK(first.witnesses[i].residual == second.witnesses[i].residual);
  }
}

TEST_CASE("failing checks report ranked witnesses") {
  const ModelPtr product = productHeisenberg();
  CheckOptions opts;
  opts.samples = 30;
  const CheckReport report = runCheck(*product, "j-squared", opts);
  CHECK_FALSE(report.pass);
  CHECK(report.maxResidual > 0.3);
  REQUIRE(!report.witnesses.empty());
  CHECK(report.witnesses.size() <= 5);
  CHECK(report.witnesses.front().residual == report.maxResidual);
  CHECK(std::is_sorted(report.witnesses.begin(), report.witnesses.end(),
                       [](const CheckWitness& a, const CheckWitness& b) {
                         return a.residual > b.residual;
                       }));
}

TEST_CASE("degenerate extension fails the dedicated checks") {
  const ModelPtr degenerate = degenerateModel();
  CheckOptions opts;
  opts.samples = 10;

  const CheckReport eigen = runCheck(*degenerate, "nondegenerate-extension", opts);
  CHECK_FALSE(eigen.pass);

  const CheckReport rank = runCheck(*degenerate, "step2-decomposition", opts);
  CHECK_FALSE(rank.pass);
  CHECK(rank.maxResidual == doctest::Approx(1.0));
  REQUIRE(!rank.witnesses.empty());
  CHECK(rank.witnesses.front().w.size() == 3);

  const ModelPtr heis = heisenberg();
  CHECK(runCheck(*heis, "nondegenerate-extension", opts).pass);
  CHECK(runCheck(*heis, "step2-decomposition", opts).pass);
}

TEST_CASE("check registry is sorted and described") {
  const std::vector<std::string> names = modelCheckNames();
  CHECK(names.size() == 16);
  CHECK(std::is_sorted(names.begin(), names.end()));

  const auto described = allCheckDescriptions();
  CHECK(described.size() == 19);
  CHECK(std::is_sorted(described.begin(), described.end(),
                       [](const auto& a, const auto& b) {
                         return a.first < b.first;
                       }));
  for (const std::string& name : names) {
    const bool found =
        std::any_of(described.begin(), described.end(),
                    [&name](const auto& entry) { return entry.first == name; });
    INFO("check " << name);
    CHECK(found);
  }
  for (const char* trajectory :
       {"constant-kappa1", "vanishing-kappa2", "energy-conservation"}) {
    const std::string name = trajectory;
    const bool found =
        std::any_of(described.begin(), described.end(),
                    [&name](const auto& entry) { return entry.first == name; });
    INFO("check " << name);
    CHECK(found);
  }
}

}  // TEST_SUITE
