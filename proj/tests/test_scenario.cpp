#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "twistdex/errors.hpp"
#include "twistdex/scenario.hpp"

using namespace twistdex;

namespace {

std::string stripTimings(const std::string& report) {
  static const std::regex timing(",\"wallMs\":[^}]*\\}");
  return std::regex_replace(report, timing, "}");
}

const char* kTinyScenario = R"json({
  "formatVersion": 1,
  "name": "tiny",
  "seed": 4,
  "space": { "dimPlus": 2, "dimMinus": 2 },
  "dirac": { "kind": "random-odd-selfadjoint", "invertible": true },
  "idempotents": [ { "kind": "seeded", "q": 2, "seed": 6, "select": [1, 0] } ],
  "checks": ["validate-triple", "index-kernels", "adjoint-identity", "similarity"]
}
)json";

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("parser rejects malformed input") {
  CHECK_THROWS_AS((void)parseScenario("not json"), Error);
  try {
    (void)parseScenario("{\"formatVersion\": 1}");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::ParseError);  // missing name
  }
  // Unknown keys are reported rather than ignored.
  CHECK_THROWS_AS(
      (void)parseScenario(R"({"formatVersion":1,"name":"x",
        "space":{"dimPlus":2,"dimMinus":2},"surprise":true})"),
      Error);
  // Version gate.
  CHECK_THROWS_AS(
      (void)parseScenario(R"({"formatVersion":2,"name":"x",
        "space":{"dimPlus":2,"dimMinus":2}})"),
      Error);
  try {
    (void)loadScenario("/nonexistent/path.json");
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::Io);
  }
}

TEST_CASE("builtin corpus parses and matches the shipped files") {
  const auto corpus = builtinScenarios();
  CHECK(corpus.size() >= 8);
  for (const auto& [name, text] : corpus) {
    const Scenario s = parseScenario(text);
    CHECK(s.name == name);
    const std::string path =
        std::string(TWISTDEX_SCENARIO_DIR) + "/" + name + ".json";
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing scenario file " << path);
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK_MESSAGE(buf.str() == text, "drift in " << path);
  }
}

TEST_CASE("running a scenario produces a deterministic report") {
  const Scenario s = parseScenario(kTinyScenario);
  RunOptions opts;
  const RunReport rep = runScenario(s, opts);
  CHECK(rep.allPassed);
  CHECK(rep.checks.size() == 4);
  CHECK(rep.checks[0].name == "validate-triple");
  CHECK(rep.checks[0].anchor == "triple.axioms");

  const std::string first = stripTimings(reportToJsonLines(rep));
  const std::string second = stripTimings(reportToJsonLines(runScenario(s, opts)));
  CHECK(first == second);

  RunOptions threaded;
  threaded.threads = 2;
  const std::string third =
      stripTimings(reportToJsonLines(runScenario(s, threaded)));
  CHECK(first == third);

  // Table rendering mentions every check.
  const std::string table = reportToTable(rep);
  CHECK(table.find("PASS") != std::string::npos);
  CHECK(table.find("similarity") != std::string::npos);
}

TEST_CASE("seed and tolerance options change the outcome") {
  const Scenario s = parseScenario(kTinyScenario);
  RunOptions strict;
  strict.tolerance = -1.0;  // every residual comparison fails
  const RunReport rep = runScenario(s, strict);
  CHECK_FALSE(rep.allPassed);

  RunOptions reseeded;
  reseeded.seed = 999;
  const RunReport other = runScenario(s, reseeded);
  CHECK(other.seed == 999);
  CHECK(other.allPassed);
}

TEST_CASE("unknown check names are rejected") {
  Scenario s = parseScenario(kTinyScenario);
  s.checks = {"no-such-check"};
  CHECK_THROWS_AS((void)runScenario(s, RunOptions{}), Error);
}

TEST_CASE("expected signals flip failures into passes") {
  const char* text = R"json({
    "formatVersion": 1,
    "name": "signal-test",
    "space": { "dimPlus": 2, "dimMinus": 2 },
    "dirac": { "kind": "zero" },
    "idempotents": [ { "kind": "seeded", "q": 1, "seed": 3, "select": [1] } ],
    "checks": ["parametrix", "index-kernels"],
    "expectSignals": { "parametrix": "requires-invertible" }
  })json";
  const RunReport rep = runScenario(parseScenario(text), RunOptions{});
  CHECK(rep.allPassed);
  CHECK(rep.checks[0].signal == "requires-invertible");
  CHECK(rep.checks[0].passed);

  // Expecting a signal that never fires is a failure.
  const char* wrong = R"json({
    "formatVersion": 1,
    "name": "signal-test-2",
    "space": { "dimPlus": 2, "dimMinus": 2 },
    "dirac": { "kind": "random-odd-selfadjoint", "invertible": true },
    "idempotents": [ { "kind": "seeded", "q": 1, "seed": 3, "select": [1] } ],
    "checks": ["parametrix"],
    "expectSignals": { "parametrix": "requires-invertible" }
  })json";
  CHECK_FALSE(runScenario(parseScenario(wrong), RunOptions{}).allPassed);
}

TEST_CASE("materialization failures are reported, not thrown") {
  // Invertible odd operator on unequal sector dimensions cannot exist.
  const char* text = R"json({
    "formatVersion": 1,
    "name": "bad-dirac",
    "space": { "dimPlus": 3, "dimMinus": 2 },
    "dirac": { "kind": "random-odd-selfadjoint", "invertible": true }
  })json";
  const RunReport rep = runScenario(parseScenario(text), RunOptions{});
  CHECK_FALSE(rep.allPassed);
  REQUIRE(rep.checks.size() == 1);
  CHECK(rep.checks[0].name == "materialize");
  CHECK(rep.checks[0].signal == "invalid-argument");

  // The same failure can be declared as expected.
  const char* expected = R"json({
    "formatVersion": 1,
    "name": "bad-dirac-expected",
    "space": { "dimPlus": 3, "dimMinus": 2 },
    "dirac": { "kind": "random-odd-selfadjoint", "invertible": true },
    "expectSignals": { "materialize": "invalid-argument" }
  })json";
  CHECK(runScenario(parseScenario(expected), RunOptions{}).allPassed);
}

TEST_CASE("default selection skips inverse-based checks on singular input") {
  const char* text = R"json({
    "formatVersion": 1,
    "name": "singular-defaults",
    "space": { "dimPlus": 2, "dimMinus": 2 },
    "dirac": { "kind": "zero" },
    "idempotents": [ { "kind": "seeded", "q": 1, "seed": 3, "select": [1] } ]
  })json";
  const RunReport rep = runScenario(parseScenario(text), RunOptions{});
  for (const auto& check : rep.checks) {
    CHECK(check.name != "parametrix");
    CHECK(check.name != "hormander");
    CHECK(check.name != "chern-pairing");
    CHECK(check.name != "lemma-relations");
  }
  CHECK(rep.allPassed);
}

TEST_CASE("registry lists every check with a unique name") {
  const auto names = listCheckNames();
  CHECK(names.size() == 15);
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      CHECK(names[i] != names[j]);
    }
  }
}

}  // TEST_SUITE
