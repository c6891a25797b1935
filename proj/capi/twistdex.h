#ifndef TWISTDEX_CAPI_H
#define TWISTDEX_CAPI_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Batch verification of twisted spectral constructions on matrix models.
 * All functions are thread-safe with respect to distinct handles; the last
 * error message is stored per thread. Strings returned through out-pointers
 * are heap copies owned by the caller, released with twistdex_string_free. */

typedef struct twistdex_scenario twistdex_scenario;
typedef struct twistdex_report twistdex_report;

typedef enum twistdex_status {
  TWISTDEX_OK = 0,
  TWISTDEX_ERROR_IO = 1,
  TWISTDEX_ERROR_PARSE = 2,
  TWISTDEX_ERROR_INVALID_ARGUMENT = 3,
  TWISTDEX_ERROR_NUMERIC = 4,
  TWISTDEX_ERROR_INTERNAL = 5
} twistdex_status;

/* Library version as "major.minor.patch". Static storage, do not free. */
const char* twistdex_version(void);

/* Message of the most recent failure on this thread. Static storage. */
const char* twistdex_last_error(void);

void twistdex_string_free(char* s);

twistdex_status twistdex_scenario_load_file(const char* path,
                                            twistdex_scenario** out);
twistdex_status twistdex_scenario_load_string(const char* text,
                                              twistdex_scenario** out);
void twistdex_scenario_free(twistdex_scenario* s);

/* Scenario name. Owned by the scenario handle, valid until it is freed. */
const char* twistdex_scenario_name(const twistdex_scenario* s);

typedef struct twistdex_run_options {
  int has_tolerance; /* nonzero to apply `tolerance` to every check */
  double tolerance;
  int has_seed; /* nonzero to override the scenario seed */
  uint64_t seed;
  int threads; /* 0 means TWISTDEX_THREADS or hardware default */
} twistdex_run_options;

/* Runs every applicable check, or the list pinned in the scenario. `opts`
 * may be NULL for defaults. A report is produced for any completed run,
 * regardless of whether checks passed. */
twistdex_status twistdex_run(const twistdex_scenario* s,
                             const twistdex_run_options* opts,
                             twistdex_report** out);

void twistdex_report_free(twistdex_report* r);

/* Number of check results in the report. */
size_t twistdex_report_size(const twistdex_report* r);

/* Nonzero when every check passed. */
int twistdex_report_all_passed(const twistdex_report* r);

/* Rendered report, one JSON object per line. Caller frees. */
twistdex_status twistdex_report_json(const twistdex_report* r, char** out);

/* Human-readable table. Caller frees. */
twistdex_status twistdex_report_table(const twistdex_report* r, char** out);

/* Newline-separated list of registered check names. Caller frees. */
twistdex_status twistdex_list_checks(char** out);

/* Writes the built-in scenario corpus into a directory as <name>.json files.
 * The directory must already exist. */
twistdex_status twistdex_emit_examples(const char* directory);

#ifdef __cplusplus
}
#endif

#endif /* TWISTDEX_CAPI_H */
