#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "twistdex.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

void printError(const char* stage) {
  std::fprintf(stderr, "twistdex: %s: %s\n", stage, twistdex_last_error());
}

int emitExamples(const std::string& dir) {
  if (twistdex_emit_examples(dir.c_str()) != TWISTDEX_OK) {
    printError("emit-examples");
    return kExitUsage;
  }
  std::printf("wrote example scenarios to %s\n", dir.c_str());
  return kExitPass;
}

int listChecks() {
  char* text = nullptr;
  if (twistdex_list_checks(&text) != TWISTDEX_OK) {
    printError("list-checks");
    return kExitUsage;
  }
  std::fputs(text, stdout);
  twistdex_string_free(text);
  return kExitPass;
}

int runOne(const std::string& path, const twistdex_run_options& opts,
           const std::string& format) {
  twistdex_scenario* scenario = nullptr;
  if (twistdex_scenario_load_file(path.c_str(), &scenario) != TWISTDEX_OK) {
    printError(path.c_str());
    return kExitUsage;
  }

  twistdex_report* report = nullptr;
  const twistdex_status runStatus = twistdex_run(scenario, &opts, &report);
  twistdex_scenario_free(scenario);
  if (runStatus != TWISTDEX_OK) {
    printError(path.c_str());
    return kExitUsage;
  }

  char* rendered = nullptr;
  const twistdex_status renderStatus =
      format == "table" ? twistdex_report_table(report, &rendered)
                        : twistdex_report_json(report, &rendered);
  if (renderStatus != TWISTDEX_OK) {
    printError(path.c_str());
    twistdex_report_free(report);
    return kExitUsage;
  }
  std::fputs(rendered, stdout);
  twistdex_string_free(rendered);

  const bool passed = twistdex_report_all_passed(report) != 0;
  twistdex_report_free(report);
  return passed ? kExitPass : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch verification of twisted spectral constructions on "
               "finite matrix models"};
  app.set_version_flag("--version", std::string(twistdex_version()));

  std::vector<std::string> scenarios;
  std::string format = "json";
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string emitDir;
  bool list = false;

  app.add_option("-s,--scenario", scenarios, "Scenario file to run; repeatable");
  app.add_option("-f,--format", format, "Report format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  auto* tolOpt = app.add_option("-t,--tolerance", tolerance,
                                "Override every check tolerance");
  auto* seedOpt = app.add_option("--seed", seed, "Override the scenario seed");
  app.add_option("-j,--threads", threads,
                 "Worker threads; 0 reads TWISTDEX_THREADS or the hardware "
                 "default");
  app.add_option("--emit-examples", emitDir,
                 "Write the built-in scenario corpus into a directory");
  app.add_flag("--list-checks", list, "Print registered check names");

  CLI11_PARSE(app, argc, argv);

  if (list) return listChecks();
  if (!emitDir.empty()) return emitExamples(emitDir);
  if (scenarios.empty()) {
    std::fprintf(stderr, "twistdex: nothing to do; pass --scenario, "
                         "--list-checks or --emit-examples\n");
    return kExitUsage;
  }

  twistdex_run_options opts{};
  opts.has_tolerance = tolOpt->count() > 0 ? 1 : 0;
  opts.tolerance = tolerance;
  opts.has_seed = seedOpt->count() > 0 ? 1 : 0;
  opts.seed = seed;
  opts.threads = threads;

  int worst = kExitPass;
  for (const auto& path : scenarios) {
    const int code = runOne(path, opts, format);
    if (code > worst) worst = code;
  }
  return worst;
}
