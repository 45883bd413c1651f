#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <subriem/subriem.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

namespace fs = std::filesystem;

fs::path freshDir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() /
      ("subriem-capi-" + std::to_string(::getpid()) + "-" + tag + "-" +
       std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Unit horizontal covector with vertical charge 1 at the origin of the
// three-dimensional built-in model.
const double kOrigin[3] = {0.0, 0.0, 0.0};
const double kLoopCovector[3] = {1.0, 0.0, 1.0};

}  // namespace

TEST_CASE("model creation, dimensions, and destruction") {
  sr_model* model = nullptr;
  REQUIRE(sr_model_create("heisenberg", &model) == SR_OK);
  REQUIRE(model != nullptr);
  int m = 0;
  int n = 0;
  int chart = 0;
  CHECK(sr_model_dims(model, &m, &n, &chart) == SR_OK);
  CHECK(m == 3);
  CHECK(n == 2);
  CHECK(chart == 3);
  // Output selectors may be skipped.
  CHECK(sr_model_dims(model, nullptr, nullptr, nullptr) == SR_OK);
  sr_model_destroy(model);

  sr_model* sphere = nullptr;
  REQUIRE(sr_model_create("hopf", &sphere) == SR_OK);
  CHECK(sr_model_dims(sphere, &m, &n, &chart) == SR_OK);
  CHECK(m == 3);
  CHECK(n == 2);
  CHECK(chart == 4);
  sr_model_destroy(sphere);
}

TEST_CASE("errors set status codes and a readable message") {
  sr_model* model = nullptr;
  CHECK(sr_model_create("no-such-model", &model) == SR_ERR_INPUT);
  CHECK(model == nullptr);
  CHECK(std::strlen(sr_last_error()) > 0);
  CHECK(std::string(sr_last_error()).find("no-such-model") !=
        std::string::npos);

  CHECK(sr_model_create(nullptr, &model) == SR_ERR_INPUT);
  CHECK(sr_model_create("heisenberg", nullptr) == SR_ERR_INPUT);
  CHECK(sr_model_dims(nullptr, nullptr, nullptr, nullptr) == SR_ERR_INPUT);
  CHECK(sr_trajectory_sample_count(nullptr, nullptr) == SR_ERR_INPUT);

  int exitCode = 0;
  CHECK(sr_run_experiment("/nonexistent/path.cfg", nullptr, &exitCode) ==
        SR_ERR_INPUT);
  CHECK(sr_verify_model("no-such-model", nullptr, &exitCode) == SR_ERR_INPUT);
}

TEST_CASE("geodesic integration round trip") {
  sr_model* model = nullptr;
  REQUIRE(sr_model_create("heisenberg", &model) == SR_OK);

  sr_trajectory* trajectory = nullptr;
  REQUIRE(sr_integrate_normal_geodesic(model, kOrigin, kLoopCovector, 2.0,
                                       1e-3, 1, &trajectory) == SR_OK);
  REQUIRE(trajectory != nullptr);

  int count = 0;
  REQUIRE(sr_trajectory_sample_count(trajectory, &count) == SR_OK);
  CHECK(count == 2001);

  std::vector<double> times(count);
  CHECK(sr_trajectory_times(trajectory, times.data()) == SR_OK);
  CHECK(times.front() == 0.0);
  CHECK(std::abs(times.back() - 2.0) < 1e-12);

  std::vector<double> states(static_cast<size_t>(count) * 6);
  CHECK(sr_trajectory_states(trajectory, states.data()) == SR_OK);
  // Row zero is the initial state; the covector was already unit speed.
  CHECK(states[0] == 0.0);
  CHECK(states[3] == 1.0);
  CHECK(states[5] == 1.0);
  // The unit-charge covector drives a circle of radius one: at t = pi
  // the planar coordinates reach (0, 2) up to integrator error.
  const int half = 1571;  /* index closest to pi */
  const double* row = &states[static_cast<size_t>(half) * 6];
  CHECK(std::abs(row[0] * row[0] + (row[1] - 1.0) * (row[1] - 1.0) - 1.0) <
        1e-3);

  double drift = -1.0;
  CHECK(sr_trajectory_energy_drift(model, trajectory, &drift) == SR_OK);
  CHECK(drift >= 0.0);
  CHECK(drift < 1e-10);

  std::vector<double> kappa1(count);
  std::vector<double> kappa2(count);
  CHECK(sr_trajectory_curvatures(model, trajectory, kappa1.data(),
                                 kappa2.data()) == SR_OK);
  for (int s = count / 4; s < 3 * count / 4; ++s) {
    CHECK(std::abs(kappa1[s] - 1.0) < 1e-6);
    CHECK(std::abs(kappa2[s]) < 1e-6);
  }
  // Either curvature output may be skipped.
  CHECK(sr_trajectory_curvatures(model, trajectory, kappa1.data(), nullptr) ==
        SR_OK);

  sr_trajectory_destroy(trajectory);
  sr_model_destroy(model);
}

TEST_CASE("invalid integration inputs are rejected") {
  sr_model* model = nullptr;
  REQUIRE(sr_model_create("heisenberg", &model) == SR_OK);
  sr_trajectory* trajectory = nullptr;
  CHECK(sr_integrate_normal_geodesic(model, kOrigin, kLoopCovector, 2.0, -1.0,
                                     1, &trajectory) == SR_ERR_INPUT);
  CHECK(trajectory == nullptr);
  CHECK(sr_integrate_normal_geodesic(model, nullptr, kLoopCovector, 2.0, 1e-3,
                                     1, &trajectory) == SR_ERR_INPUT);
  sr_model_destroy(model);

  sr_model* sphere = nullptr;
  REQUIRE(sr_model_create("hopf", &sphere) == SR_OK);
  const double offSphere[4] = {2.0, 0.0, 0.0, 0.0};
  const double covector[4] = {0.0, 1.0, 0.0, 0.0};
  CHECK(sr_integrate_normal_geodesic(sphere, offSphere, covector, 1.0, 1e-3,
                                     1, &trajectory) == SR_ERR_GEOMETRY);
  sr_model_destroy(sphere);
}

TEST_CASE("carnot structure constants reproduce the built-in model") {
  // Single entry [X_1, X_2] = V_1; the reversed pair is implied.
  const double entries[4] = {1.0, 1.0, 2.0, 1.0};
  sr_model* carnot = nullptr;
  REQUIRE(sr_model_create_carnot(2, 3, entries, 1, &carnot) == SR_OK);

  sr_model* builtin = nullptr;
  REQUIRE(sr_model_create("heisenberg", &builtin) == SR_OK);

  sr_trajectory* fromCarnot = nullptr;
  sr_trajectory* fromBuiltin = nullptr;
  REQUIRE(sr_integrate_normal_geodesic(carnot, kOrigin, kLoopCovector, 1.0,
                                       1e-3, 1, &fromCarnot) == SR_OK);
  REQUIRE(sr_integrate_normal_geodesic(builtin, kOrigin, kLoopCovector, 1.0,
                                       1e-3, 1, &fromBuiltin) == SR_OK);

  int count = 0;
  REQUIRE(sr_trajectory_sample_count(fromCarnot, &count) == SR_OK);
  std::vector<double> a(static_cast<size_t>(count) * 6);
  std::vector<double> b(static_cast<size_t>(count) * 6);
  CHECK(sr_trajectory_states(fromCarnot, a.data()) == SR_OK);
  CHECK(sr_trajectory_states(fromBuiltin, b.data()) == SR_OK);
  double gap = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    gap = std::max(gap, std::abs(a[i] - b[i]));
  }
  CHECK(gap < 1e-14);

  sr_trajectory_destroy(fromCarnot);
  sr_trajectory_destroy(fromBuiltin);
  sr_model_destroy(carnot);
  sr_model_destroy(builtin);

  // Degenerate constants are rejected through the same path as the C++
  // factory.
  sr_model* degenerate = nullptr;
  CHECK(sr_model_create_carnot(2, 3, nullptr, 0, &degenerate) ==
        SR_ERR_INPUT);
  CHECK(degenerate == nullptr);
}

TEST_CASE("verify and experiment runs work through the C surface") {
  const fs::path dir = freshDir("runs");
  const std::string out = (dir / "out").string();

  sr_run_options options;
  std::memset(&options, 0, sizeof(options));
  options.seed = 7;
  options.has_seed = 1;
  options.output_dir = out.c_str();

  int exitCode = -1;
  REQUIRE(sr_verify_model("heisenberg", &options, &exitCode) == SR_OK);
  CHECK(exitCode == 0);
  CHECK(fs::exists(dir / "out" / "verify-heisenberg" / "report.json"));

  // The product model fails its H-type style checks.
  REQUIRE(sr_verify_model("product-heisenberg", &options, &exitCode) == SR_OK);
  CHECK(exitCode == 1);

  const fs::path config = dir / "experiment.cfg";
  {
    std::FILE* f = std::fopen(config.string().c_str(), "w");
    REQUIRE(f != nullptr);
    std::fputs(
        "[experiment demo]\n"
        "model = heisenberg\n"
        "T = 0.5\n"
        "checks = constant-kappa1, energy-conservation\n"
        "ic.1.x0 = 0 0 0\n"
        "ic.1.lambda0 = 1 0 1\n",
        f);
    std::fclose(f);
  }
  REQUIRE(sr_run_experiment(config.string().c_str(), &options, &exitCode) ==
          SR_OK);
  CHECK(exitCode == 0);
  CHECK(fs::exists(dir / "out" / "demo" / "trajectory_ic1.csv"));

  fs::remove_all(dir);
}

TEST_CASE("listing buffers follow the two-call protocol") {
  size_t needed = 0;
  REQUIRE(sr_list_models(nullptr, 0, &needed) == SR_OK);
  REQUIRE(needed > 1);

  std::vector<char> buffer(needed);
  REQUIRE(sr_list_models(buffer.data(), buffer.size(), &needed) == SR_OK);
  const std::string models(buffer.data());
  CHECK(models.find("heisenberg") != std::string::npos);
  CHECK(models.find("hopf") != std::string::npos);
  CHECK(models.back() == '\n');

  // Truncation is silent and still terminated.
  std::vector<char> tiny(5);
  REQUIRE(sr_list_models(tiny.data(), tiny.size(), &needed) == SR_OK);
  CHECK(tiny[4] == '\0');
  CHECK(needed == buffer.size());

  REQUIRE(sr_list_checks(nullptr, 0, &needed) == SR_OK);
  std::vector<char> checks(needed);
  REQUIRE(sr_list_checks(checks.data(), checks.size(), &needed) == SR_OK);
  CHECK(std::string(checks.data()).find("j-squared") != std::string::npos);
}

