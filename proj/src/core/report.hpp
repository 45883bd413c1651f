// CSV and JSON output writers for experiment runs.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/criteria.hpp"
#include "core/flows.hpp"
#include "core/frenet.hpp"
#include "core/linalg.hpp"

namespace subriem {

struct RunReport {
  std::string model;
  std::uint64_t seed = 0;
  std::vector<CheckReport> checks;
};

// UTC timestamp like 2026-08-18T12:00:00Z.
std::string isoTimestampUtcNow();

// Header t,x1..xm,lambda1..lambdam; one row per sample, %.17g floats.
void writeTrajectoryCsv(const std::string& path, const PhaseTrajectory& traj);

// Header t,y1..yn,kappa1,kappa2. The profile must be sampled on base.times.
void writeCurvatureCsv(const std::string& path, const BaseTrajectory& base,
                       const CurvatureProfile& profile);

// Serializes the report; the timing object holds only the timestamp so two
// runs differ in exactly one line.
std::string reportToJson(const RunReport& report, const std::string& timestamp);

void writeReportJson(const std::string& path, const RunReport& report);

}  // namespace subriem
