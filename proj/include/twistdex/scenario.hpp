#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistdex/connections.hpp"

namespace twistdex {

// ----- scenario description, normally parsed from JSON -----

struct ScenarioIdempotent {
  std::string kind = "seeded";  // "seeded" | "explicit"
  int q = 1;
  std::uint64_t seed = 1;
  std::vector<int> select;
  std::vector<ComplexMatrix> entries;
};

struct ScenarioConnection {
  bool seeded = true;
  int q = 1;
  std::uint64_t seed = 1;
  int termCount = 4;
  std::vector<ConnectionTerm> terms;
};

struct ScenarioFamily {
  std::string kind = "polynomial";  // "polynomial" | "doubling" | "pieces"
  std::uint64_t seed = 1;
  double amplitude = 0.4;
  std::vector<PolyPiece> pieces;
};

struct ScenarioHomotopy {
  std::vector<ScenarioFamily> families;
  int cocycleDegree = 1;
  int gridPoints = 17;
  int panels = 64;
  int refinedPanels = 128;
  int sampleTuples = 4;
};

struct Scenario {
  int formatVersion = 1;
  std::string name;
  std::uint64_t seed = 1;
  GradedSpace space;
  double summability = 1.0;

  std::string diracKind = "random-odd-selfadjoint";  // "explicit" | "zero"
  ComplexMatrix diracMatrix;
  double diracScale = 1.0;
  bool diracInvertible = true;

  std::string algebraKind = "full-even";  // "generated"
  std::vector<ComplexMatrix> generators;

  std::string sigmaKind = "identity";  // "inner" | "linear"
  ComplexMatrix innerK;
  bool innerRandom = false;
  double innerSpread = 0.3;
  std::vector<ComplexMatrix> linearSpan;
  std::vector<ComplexMatrix> linearImages;
  std::vector<ComplexMatrix> linearRootImages;  // optional declared root

  bool conformalEnabled = false;
  ComplexMatrix conformalK;
  bool conformalRandom = false;
  double conformalSpread = 0.3;

  std::vector<ScenarioIdempotent> idempotents;
  std::vector<ScenarioConnection> connections;
  std::optional<ScenarioHomotopy> homotopy;

  std::vector<std::string> checks;  // empty: every applicable check
  double defaultTolerance = 0.0;    // 0: builtin per-check defaults
  std::map<std::string, double> toleranceOverrides;
  std::map<std::string, std::string> expectSignals;  // check -> error code name
};

// Parses a scenario document. Malformed input signals parse-error; file
// problems signal io-error.
Scenario parseScenario(const std::string& jsonText);
Scenario loadScenario(const std::string& path);

// ----- execution -----

struct RunOptions {
  std::optional<double> tolerance;     // replaces builtin default tolerances
  std::optional<std::uint64_t> seed;   // replaces the scenario seed
  int threads = 0;                     // 0: environment, then 1
};

struct CheckResult {
  std::string name;
  std::string anchor;
  bool passed = false;
  double residual = 0.0;
  double scale = 1.0;
  double tolerance = 0.0;
  std::string signal;  // error code name when the check raised one
  std::string note;
  std::vector<std::pair<std::string, double>> values;
  double wallMs = 0.0;
};

struct RunReport {
  std::string scenarioName;
  std::uint64_t seed = 1;
  std::vector<CheckResult> checks;
  bool allPassed = false;
};

RunReport runScenario(const Scenario& s, const RunOptions& opts);

// One JSON object per line: header, one line per check, summary. Byte
// deterministic for fixed inputs except for the wallMs timing fields.
std::string reportToJsonLines(const RunReport& r);
std::string reportToTable(const RunReport& r);

// Canonical check names in execution order.
std::vector<std::string> listCheckNames();

// Bundled scenario documents, name -> JSON text.
std::vector<std::pair<std::string, std::string>> builtinScenarios();

}  // namespace twistdex
