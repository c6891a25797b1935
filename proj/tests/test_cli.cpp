#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int exitCode = -1;
  std::string output;
};

// Runs the installed binary with stdout and stderr folded into one capture
// file, so assertions can look at everything the user would see.
CliResult runCli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const fs::path capture =
      fs::temp_directory_path() /
      ("twistdex-cli-capture-" + std::to_string(counter++) + ".txt");
  std::string command = env;
  if (!command.empty()) command += " ";
  command += std::string(TWISTDEX_CLI_PATH) + " " + args + " > " +
             capture.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  CliResult result;
#ifdef _WIN32
  result.exitCode = raw;
#else
  result.exitCode = WEXITSTATUS(raw);
#endif
  std::ifstream in(capture);
  std::stringstream buf;
  buf << in.rdbuf();
  result.output = buf.str();
  fs::remove(capture);
  return result;
}

std::string scenarioPath(const std::string& name) {
  return std::string(TWISTDEX_SCENARIO_DIR) + "/" + name + ".json";
}

std::string stripTimings(const std::string& text) {
  static const std::regex pattern(",\"wallMs\":[^}]*\\}");
  return std::regex_replace(text, pattern, "}");
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("informational flags") {
  CHECK(runCli("--version").exitCode == 0);

  const CliResult checks = runCli("--list-checks");
  CHECK(checks.exitCode == 0);
  CHECK(checks.output.find("validate-triple") != std::string::npos);
  CHECK(checks.output.find("homotopy") != std::string::npos);

  const CliResult bare = runCli("");
  CHECK(bare.exitCode == 2);
}

TEST_CASE("running a scenario produces a passing json report") {
  const CliResult run = runCli("-s " + scenarioPath("identity-basic"));
  CHECK(run.exitCode == 0);
  CHECK(run.output.find("\"type\":\"summary\"") != std::string::npos);
  CHECK(run.output.find("\"passed\":true") != std::string::npos);

  const CliResult table =
      runCli("-s " + scenarioPath("identity-basic") + " -f table");
  CHECK(table.exitCode == 0);
  CHECK(table.output.find("PASS") != std::string::npos);
}

TEST_CASE("exit codes distinguish usage errors from check failures") {
  const CliResult missing = runCli("-s /no/such/scenario.json");
  CHECK(missing.exitCode == 2);
  CHECK(missing.output.find("twistdex:") != std::string::npos);

  // An impossible tolerance forces a clean, deterministic check failure.
  const fs::path failing =
      fs::temp_directory_path() / "twistdex-cli-failing.json";
  {
    std::ofstream out(failing);
    out << R"({
  "formatVersion": 1,
  "name": "forced-failure",
  "seed": 3,
  "space": { "dimPlus": 2, "dimMinus": 2 },
  "dirac": { "kind": "random-odd-selfadjoint", "invertible": true },
  "idempotents": [ { "kind": "seeded", "q": 2, "seed": 4, "select": [1, 0] } ],
  "checks": ["index-kernels", "similarity"],
  "tolerances": { "overrides": { "similarity": -1.0 } }
}
)";
  }
  const CliResult failed = runCli("-s " + failing.string());
  CHECK(failed.exitCode == 1);
  CHECK(failed.output.find("\"passed\":false") != std::string::npos);
  fs::remove(failing);
}

TEST_CASE("reports are byte-stable across reruns and thread counts") {
  const std::string args = "-s " + scenarioPath("inner-conformal");
  const CliResult first = runCli(args);
  const CliResult second = runCli(args);
  const CliResult threaded = runCli(args, "TWISTDEX_THREADS=2");
  REQUIRE(first.exitCode == 0);
  REQUIRE(second.exitCode == 0);
  REQUIRE(threaded.exitCode == 0);
  CHECK(stripTimings(first.output) == stripTimings(second.output));
  CHECK(stripTimings(first.output) == stripTimings(threaded.output));
}

}  // TEST_SUITE
