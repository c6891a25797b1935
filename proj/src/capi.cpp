#include "twistdex.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "twistdex/errors.hpp"
#include "twistdex/scenario.hpp"
#include "twistdex/version.hpp"

struct twistdex_scenario {
  twistdex::Scenario value;
};

struct twistdex_report {
  twistdex::RunReport value;
};

namespace {

thread_local std::string gLastError;

twistdex_status mapCode(twistdex::ErrorCode code) {
  using twistdex::ErrorCode;
  switch (code) {
    case ErrorCode::Io:
      return TWISTDEX_ERROR_IO;
    case ErrorCode::ParseError:
      return TWISTDEX_ERROR_PARSE;
    case ErrorCode::RequiresInvertible:
    case ErrorCode::NotIdempotent:
    case ErrorCode::RibbonConstructionFailure:
    case ErrorCode::InvalidFamily:
    case ErrorCode::NumericFailure:
      return TWISTDEX_ERROR_NUMERIC;
    case ErrorCode::InvalidArgument:
    case ErrorCode::DomainError:
    case ErrorCode::InvalidConformalFactor:
    case ErrorCode::NoRibbonStructure:
    case ErrorCode::OutsideSpan:
    case ErrorCode::InvalidConnection:
    case ErrorCode::ContractViolation:
      return TWISTDEX_ERROR_INVALID_ARGUMENT;
    case ErrorCode::Internal:
      return TWISTDEX_ERROR_INTERNAL;
  }
  return TWISTDEX_ERROR_INTERNAL;
}

template <typename Fn>
twistdex_status guarded(Fn&& fn) {
  try {
    fn();
    return TWISTDEX_OK;
  } catch (const twistdex::Error& err) {
    gLastError = err.what();
    return mapCode(err.code());
  } catch (const std::bad_alloc&) {
    gLastError = "out of memory";
    return TWISTDEX_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    gLastError = e.what();
    return TWISTDEX_ERROR_INTERNAL;
  } catch (...) {
    gLastError = "unknown failure";
    return TWISTDEX_ERROR_INTERNAL;
  }
}

char* copyString(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

twistdex_status requireArgs(bool ok) {
  if (!ok) {
    gLastError = "null argument";
    return TWISTDEX_ERROR_INVALID_ARGUMENT;
  }
  return TWISTDEX_OK;
}

}  // namespace

extern "C" {

const char* twistdex_version(void) { return twistdex::kVersion; }

const char* twistdex_last_error(void) { return gLastError.c_str(); }

void twistdex_string_free(char* s) { delete[] s; }

twistdex_status twistdex_scenario_load_file(const char* path,
                                            twistdex_scenario** out) {
  if (requireArgs(path != nullptr && out != nullptr) != TWISTDEX_OK) {
    return TWISTDEX_ERROR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<twistdex_scenario>();
    handle->value = twistdex::loadScenario(path);
    *out = handle.release();
  });
}

twistdex_status twistdex_scenario_load_string(const char* text,
                                              twistdex_scenario** out) {
  if (requireArgs(text != nullptr && out != nullptr) != TWISTDEX_OK) {
    return TWISTDEX_ERROR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<twistdex_scenario>();
    handle->value = twistdex::parseScenario(text);
    *out = handle.release();
  });
}

void twistdex_scenario_free(twistdex_scenario* s) { delete s; }

const char* twistdex_scenario_name(const twistdex_scenario* s) {
  return s == nullptr ? "" : s->value.name.c_str();
}

twistdex_status twistdex_run(const twistdex_scenario* s,
                             const twistdex_run_options* opts,
                             twistdex_report** out) {
  if (requireArgs(s != nullptr && out != nullptr) != TWISTDEX_OK) {
    return TWISTDEX_ERROR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    twistdex::RunOptions options;
    if (opts != nullptr) {
      if (opts->has_tolerance) options.tolerance = opts->tolerance;
      if (opts->has_seed) options.seed = opts->seed;
      options.threads = opts->threads;
    }
    auto handle = std::make_unique<twistdex_report>();
    handle->value = twistdex::runScenario(s->value, options);
    *out = handle.release();
  });
}

void twistdex_report_free(twistdex_report* r) { delete r; }

size_t twistdex_report_size(const twistdex_report* r) {
  return r == nullptr ? 0 : r->value.checks.size();
}

int twistdex_report_all_passed(const twistdex_report* r) {
  return (r != nullptr && r->value.allPassed) ? 1 : 0;
}

twistdex_status twistdex_report_json(const twistdex_report* r, char** out) {
  if (requireArgs(r != nullptr && out != nullptr) != TWISTDEX_OK) {
    return TWISTDEX_ERROR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] { *out = copyString(twistdex::reportToJsonLines(r->value)); });
}

twistdex_status twistdex_report_table(const twistdex_report* r, char** out) {
  if (requireArgs(r != nullptr && out != nullptr) != TWISTDEX_OK) {
    return TWISTDEX_ERROR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] { *out = copyString(twistdex::reportToTable(r->value)); });
}

twistdex_status twistdex_list_checks(char** out) {
  if (requireArgs(out != nullptr) != TWISTDEX_OK) {
    return TWISTDEX_ERROR_INVALID_ARGUMENT;
  }
  *out = nullptr;
  return guarded([&] {
    std::string joined;
    for (const auto& name : twistdex::listCheckNames()) {
      joined += name;
      joined += "\n";
    }
    *out = copyString(joined);
  });
}

twistdex_status twistdex_emit_examples(const char* directory) {
  if (requireArgs(directory != nullptr) != TWISTDEX_OK) {
    return TWISTDEX_ERROR_INVALID_ARGUMENT;
  }
  return guarded([&] {
    for (const auto& [name, text] : twistdex::builtinScenarios()) {
      const std::string path = std::string(directory) + "/" + name + ".json";
      std::ofstream outFile(path, std::ios::binary | std::ios::trunc);
      if (!outFile) {
        twistdex::fail(twistdex::ErrorCode::Io,
                       "cannot write example file: " + path);
      }
      outFile << text;
      if (!outFile.good()) {
        twistdex::fail(twistdex::ErrorCode::Io,
                       "cannot write example file: " + path);
      }
    }
  });
}

}  // extern "C"
