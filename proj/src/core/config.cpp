#include "core/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "core/criteria.hpp"
#include "core/errors.hpp"

namespace subriem {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& source, int line,
                       const std::string& message) {
  throw InputError(source + ":" + std::to_string(line) + ": " + message);
}

double parseDouble(const std::string& source, int line,
                   const std::string& token) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    fail(source, line, "expected a number, got '" + token + "'");
  }
  if (used != token.size()) {
    fail(source, line, "trailing characters in number '" + token + "'");
  }
  return value;
}

long parseInteger(const std::string& source, int line,
                  const std::string& token) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(token, &used);
  } catch (const std::exception&) {
    fail(source, line, "expected an integer, got '" + token + "'");
  }
  if (used != token.size()) {
    fail(source, line, "trailing characters in integer '" + token + "'");
  }
  return value;
}

std::vector<std::string> splitTokens(const std::string& text) {
  std::istringstream stream(text);
  std::vector<std::string> tokens;
  std::string token;
  while (stream >> token) {
    tokens.push_back(token);
  }
  return tokens;
}

Vec parseVector(const std::string& source, int line, const std::string& text) {
  const std::vector<std::string> tokens = splitTokens(text);
  if (tokens.empty()) {
    fail(source, line, "expected a vector of numbers");
  }
  Vec out(static_cast<int>(tokens.size()));
  for (int i = 0; i < out.size(); ++i) {
    out(i) = parseDouble(source, line, tokens[i]);
  }
  return out;
}

std::set<std::string> knownCheckNames() {
  std::set<std::string> names;
  for (const auto& [name, description] : allCheckDescriptions()) {
    (void)description;
    names.insert(name);
  }
  return names;
}

struct SectionState {
  ExperimentConfig config;
  std::map<int, InitialConditionSpec> ics;
  std::map<int, int> icLines;
  std::set<std::string> seenKeys;
  int headerLine = 0;
};

void finalizeSection(const std::string& source, SectionState& state,
                     ConfigFile& out) {
  ExperimentConfig& config = state.config;
  const int line = state.headerLine;
  const bool customCarnot =
      state.seenKeys.count("carnot.n") || state.seenKeys.count("carnot.m") ||
      !config.carnotEntries.empty();
  if (customCarnot) {
    if (!config.model.empty() && config.model != "carnot") {
      fail(source, line,
           "carnot.* keys require model = carnot, got '" + config.model + "'");
    }
    config.model = "carnot";
    if (!config.carnotBaseDim || !config.carnotManifoldDim) {
      fail(source, line, "carnot model needs both carnot.n and carnot.m");
    }
  } else if (config.model.empty()) {
    fail(source, line, "experiment '" + config.name + "' has no model key");
  } else if (config.model == "carnot") {
    fail(source, line, "model = carnot needs carnot.n, carnot.m, carnot.c.*");
  }

  int expected = 1;
  for (const auto& [index, ic] : state.ics) {
    if (index != expected) {
      fail(source, state.icLines.at(index),
           "initial condition indices must be contiguous from 1, got ic." +
               std::to_string(index));
    }
    ++expected;
    const int icLine = state.icLines.at(index);
    if (ic.phaseStyle()) {
      if (!ic.lambda0) {
        fail(source, icLine,
             "ic." + std::to_string(index) + " has x0 but no lambda0");
      }
      if (ic.y0 || ic.alpha || ic.v) {
        fail(source, icLine,
             "ic." + std::to_string(index) +
                 " mixes phase style (x0, lambda0) with base style");
      }
    } else if (ic.lambda0) {
      fail(source, icLine,
           "ic." + std::to_string(index) + " has lambda0 but no x0");
    } else {
      if (!ic.y0 || !ic.v) {
        fail(source, icLine,
             "ic." + std::to_string(index) + " needs both y0 and v");
      }
    }
    config.initialConditions.push_back(ic);
  }

  for (const ExperimentConfig& existing : out.experiments) {
    if (existing.name == config.name) {
      fail(source, line, "duplicate experiment name '" + config.name + "'");
    }
  }
  out.experiments.push_back(std::move(config));
}

}  // namespace

ConfigFile parseConfigText(const std::string& text,
                           const std::string& sourceName) {
  const std::set<std::string> checkNames = knownCheckNames();
  ConfigFile out;
  std::optional<SectionState> section;

  std::istringstream stream(text);
  std::string rawLine;
  int lineNo = 0;
  while (std::getline(stream, rawLine)) {
    ++lineNo;
    const auto hash = rawLine.find('#');
    if (hash != std::string::npos) {
      rawLine.erase(hash);
    }
    const std::string line = trim(rawLine);
    if (line.empty()) {
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(sourceName, lineNo, "unterminated section header");
      }
      const std::vector<std::string> tokens =
          splitTokens(line.substr(1, line.size() - 2));
      if (tokens.size() != 2 || tokens[0] != "experiment") {
        fail(sourceName, lineNo,
             "section header must be [experiment NAME]");
      }
      if (section) {
        finalizeSection(sourceName, *section, out);
      }
      section.emplace();
      section->config.name = tokens[1];
      section->headerLine = lineNo;
      continue;
    }

    const auto equals = line.find('=');
    if (equals == std::string::npos) {
      fail(sourceName, lineNo, "expected key = value");
    }
    if (!section) {
      fail(sourceName, lineNo, "key outside any [experiment ...] section");
    }
    const std::string key = trim(line.substr(0, equals));
    const std::string value = trim(line.substr(equals + 1));
    if (key.empty()) {
      fail(sourceName, lineNo, "empty key");
    }
    if (value.empty()) {
      fail(sourceName, lineNo, "key '" + key + "' has no value");
    }
    if (!section->seenKeys.insert(key).second) {
      fail(sourceName, lineNo, "duplicate key '" + key + "'");
    }

    ExperimentConfig& config = section->config;
    if (key == "model") {
      config.model = value;
    } else if (key == "seed") {
      const long seed = parseInteger(sourceName, lineNo, value);
      if (seed < 0) {
        fail(sourceName, lineNo, "seed must be nonnegative");
      }
      config.seed = static_cast<std::uint64_t>(seed);
    } else if (key == "T") {
      config.horizon = parseDouble(sourceName, lineNo, value);
      if (!(config.horizon > 0.0)) {
        fail(sourceName, lineNo, "T must be positive");
      }
    } else if (key == "h") {
      config.step = parseDouble(sourceName, lineNo, value);
      if (!(config.step > 0.0)) {
        fail(sourceName, lineNo, "h must be positive");
      }
    } else if (key == "out") {
      config.outputDir = value;
    } else if (key == "tol.algebraic") {
      config.tolAlgebraic = parseDouble(sourceName, lineNo, value);
      if (!(*config.tolAlgebraic > 0.0)) {
        fail(sourceName, lineNo, "tol.algebraic must be positive");
      }
    } else if (key == "tol.numeric") {
      config.tolNumeric = parseDouble(sourceName, lineNo, value);
      if (!(*config.tolNumeric > 0.0)) {
        fail(sourceName, lineNo, "tol.numeric must be positive");
      }
    } else if (key == "checks") {
      std::string piece;
      std::istringstream list(value);
      while (std::getline(list, piece, ',')) {
        const std::string name = trim(piece);
        if (name.empty()) {
          fail(sourceName, lineNo, "empty entry in checks list");
        }
        if (!checkNames.count(name)) {
          fail(sourceName, lineNo, "unknown check '" + name + "'");
        }
        config.checks.push_back(name);
      }
      if (config.checks.empty()) {
        fail(sourceName, lineNo, "checks list is empty");
      }
    } else if (key == "carnot.n") {
      const long n = parseInteger(sourceName, lineNo, value);
      if (n < 2) {
        fail(sourceName, lineNo, "carnot.n must be at least 2");
      }
      config.carnotBaseDim = static_cast<int>(n);
    } else if (key == "carnot.m") {
      const long m = parseInteger(sourceName, lineNo, value);
      if (m < 3) {
        fail(sourceName, lineNo, "carnot.m must be at least 3");
      }
      config.carnotManifoldDim = static_cast<int>(m);
    } else if (key.rfind("carnot.c.", 0) == 0) {
      (void)parseInteger(sourceName, lineNo, key.substr(9));
      const std::vector<std::string> tokens = splitTokens(value);
      if (tokens.size() != 4) {
        fail(sourceName, lineNo, "carnot.c.* entries need 'k i j value'");
      }
      CarnotEntry entry;
      entry.k = static_cast<int>(parseInteger(sourceName, lineNo, tokens[0]));
      entry.i = static_cast<int>(parseInteger(sourceName, lineNo, tokens[1]));
      entry.j = static_cast<int>(parseInteger(sourceName, lineNo, tokens[2]));
      entry.value = parseDouble(sourceName, lineNo, tokens[3]);
      if (entry.k < 1 || entry.i < 1 || entry.j < 1) {
        fail(sourceName, lineNo, "carnot.c.* indices are 1-based");
      }
      config.carnotEntries.push_back(entry);
    } else if (key.rfind("ic.", 0) == 0) {
      const auto dot = key.find('.', 3);
      if (dot == std::string::npos) {
        fail(sourceName, lineNo, "initial condition keys look like ic.N.x0");
      }
      const long index = parseInteger(sourceName, lineNo, key.substr(3, dot - 3));
      if (index < 1) {
        fail(sourceName, lineNo, "initial condition indices start at 1");
      }
      const std::string field = key.substr(dot + 1);
      InitialConditionSpec& ic = section->ics[static_cast<int>(index)];
      if (!section->icLines.count(static_cast<int>(index))) {
        section->icLines[static_cast<int>(index)] = lineNo;
      }
      const Vec parsed = parseVector(sourceName, lineNo, value);
      if (field == "x0") {
        ic.x0 = parsed;
      } else if (field == "lambda0") {
        ic.lambda0 = parsed;
      } else if (field == "y0") {
        ic.y0 = parsed;
      } else if (field == "alpha") {
        ic.alpha = parsed;
      } else if (field == "v") {
        ic.v = parsed;
      } else {
        fail(sourceName, lineNo,
             "unknown initial condition field '" + field + "'");
      }
    } else {
      fail(sourceName, lineNo, "unknown key '" + key + "'");
    }
  }

  if (section) {
    finalizeSection(sourceName, *section, out);
  }
  if (out.experiments.empty()) {
    throw InputError(sourceName + ": no [experiment ...] sections found");
  }
  return out;
}

ConfigFile parseConfigFile(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) {
    throw InputError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parseConfigText(buffer.str(), path);
}

}  // namespace subriem
