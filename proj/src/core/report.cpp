#include "core/report.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace subriem {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string formatDouble(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::ofstream openForWrite(const std::string& path) {
  std::ofstream stream(path);
  if (!stream) {
    throw InputError("cannot open '" + path + "' for writing");
  }
  return stream;
}

ordered_json vectorToJson(const Vec& v) {
  ordered_json arr = ordered_json::array();
  for (int i = 0; i < v.size(); ++i) {
    arr.push_back(v(i));
  }
  return arr;
}

}  // namespace

std::string isoTimestampUtcNow() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

void writeTrajectoryCsv(const std::string& path, const PhaseTrajectory& traj) {
  std::ofstream stream = openForWrite(path);
  const int dim = static_cast<int>(traj.x.cols());
  stream << "t";
  for (int i = 1; i <= dim; ++i) {
    stream << ",x" << i;
  }
  for (int i = 1; i <= dim; ++i) {
    stream << ",lambda" << i;
  }
  stream << "\n";
  for (int s = 0; s < static_cast<int>(traj.times.size()); ++s) {
    stream << formatDouble(traj.times[s]);
    for (int i = 0; i < dim; ++i) {
      stream << "," << formatDouble(traj.x(s, i));
    }
    for (int i = 0; i < dim; ++i) {
      stream << "," << formatDouble(traj.lambda(s, i));
    }
    stream << "\n";
  }
}

void writeCurvatureCsv(const std::string& path, const BaseTrajectory& base,
                       const CurvatureProfile& profile) {
  if (profile.times.size() != base.times.size()) {
    throw InputError("curvature profile does not match the base trajectory");
  }
  std::ofstream stream = openForWrite(path);
  const int dim = static_cast<int>(base.y.cols());
  stream << "t";
  for (int i = 1; i <= dim; ++i) {
    stream << ",y" << i;
  }
  stream << ",kappa1,kappa2\n";
  for (int s = 0; s < static_cast<int>(base.times.size()); ++s) {
    stream << formatDouble(base.times[s]);
    for (int i = 0; i < dim; ++i) {
      stream << "," << formatDouble(base.y(s, i));
    }
    stream << "," << formatDouble(profile.kappa1(s));
    stream << ","
           << formatDouble(profile.kappa2.size() > s ? profile.kappa2(s) : 0.0);
    stream << "\n";
  }
}

std::string reportToJson(const RunReport& report,
                         const std::string& timestamp) {
  ordered_json root;
  root["model"] = report.model;
  root["seed"] = report.seed;
  ordered_json checks = ordered_json::array();
  for (const CheckReport& check : report.checks) {
    ordered_json entry;
    entry["name"] = check.name;
    entry["pass"] = check.pass;
    entry["maxResidual"] = check.maxResidual;
    entry["tolerance"] = check.tolerance;
    entry["samples"] = check.samples;
    ordered_json witnesses = ordered_json::array();
    for (const CheckWitness& witness : check.witnesses) {
      ordered_json w;
      w["residual"] = witness.residual;
      if (witness.x.size() > 0) {
        w["x"] = vectorToJson(witness.x);
      }
      if (witness.alpha.size() > 0) {
        w["alpha"] = vectorToJson(witness.alpha);
      }
      if (witness.v.size() > 0) {
        w["v"] = vectorToJson(witness.v);
      }
      if (witness.w.size() > 0) {
        w["w"] = vectorToJson(witness.w);
      }
      witnesses.push_back(std::move(w));
    }
    entry["witnesses"] = std::move(witnesses);
    checks.push_back(std::move(entry));
  }
  root["checks"] = std::move(checks);
  root["timing"] = ordered_json{{"timestamp", timestamp}};
  return root.dump(2) + "\n";
}

void writeReportJson(const std::string& path, const RunReport& report) {
  std::ofstream stream = openForWrite(path);
  stream << reportToJson(report, isoTimestampUtcNow());
}

}  // namespace subriem
