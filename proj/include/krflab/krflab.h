/* krflab — numerical laboratory for Kaehler–Ricci flow on symmetric model
 * geometries.
 *
 * C interface of the shared library.  All functionality is reachable through
 * opaque handles and integer status codes; strings returned by accessor
 * functions are owned by the handle they were obtained from and stay valid
 * until that handle is released.
 *
 * Status codes double as CLI exit codes:
 *   0  success
 *   1  configuration error
 *   2  Kaehler violation before the stop time
 *   3  verdict inconsistency
 */

#ifndef KRFLAB_H
#define KRFLAB_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum krf_status {
  KRF_OK = 0,
  KRF_ERR_CONFIG = 1,
  KRF_ERR_KAEHLER = 2,
  KRF_ERR_VERDICT = 3,
  KRF_ERR_INVALID = 4,
  KRF_ERR_IO = 5,
  KRF_ERR_INTERNAL = 6
} krf_status;

/* Opaque handles. */
typedef struct krf_scenario krf_scenario;
typedef struct krf_result krf_result;

/* Library version string, e.g. "0.1.0". */
const char* krf_version(void);

/* Short name of a status code ("ok", "config-error", ...). */
const char* krf_status_name(krf_status s);

/* Detail message of the most recent failure on the calling thread; empty
 * string when the last call succeeded.  Valid until the next library call
 * on the same thread. */
const char* krf_last_error(void);

/* ---- scenarios -------------------------------------------------------- */

/* Loads a scenario configuration file (sectioned key = value text). */
krf_status krf_scenario_load(const char* path, krf_scenario** out);

/* Parses configuration text directly; name_hint names the scenario when the
 * text carries no name (may be NULL). */
krf_status krf_scenario_parse(const char* text, const char* name_hint, krf_scenario** out);

/* Bundled scenario catalog. */
int krf_scenario_count(void);
const char* krf_scenario_name(int index); /* NULL when out of range */
krf_status krf_scenario_builtin(const char* name, krf_scenario** out);

const char* krf_scenario_title(const krf_scenario* s);

/* Overrides the configured output directory. */
krf_status krf_scenario_set_output_dir(krf_scenario* s, const char* dir);

void krf_scenario_release(krf_scenario* s);

/* ---- pipelines --------------------------------------------------------- */

/* Cohomology-only analysis: singularity time, limit class, collapse
 * exponent, cone checks and volume polynomial samples.  Writes analyze.json
 * to the scenario output directory when write_outputs is nonzero. */
krf_status krf_analyze(const krf_scenario* s, int write_outputs, krf_result** out);

/* Full run: flow backend, timeseries.csv and summary.json in the output
 * directory (partial outputs are flushed on failure).  Returns KRF_OK,
 * KRF_ERR_KAEHLER or KRF_ERR_VERDICT with a result object in all three
 * cases; other status values produce no result. */
krf_status krf_run(const krf_scenario* s, krf_result** out);

/* Parameter sweep over the scenario's [sweep] section with up to `jobs`
 * concurrent runs; writes one directory per point plus index.json.  The
 * returned status is the worst per-point outcome (point failures are
 * isolated and recorded in the index). */
krf_status krf_sweep(const krf_scenario* s, int jobs, krf_result** out);

/* Digest of summary.json / index.json files: per-scenario table plus a
 * digest.csv when out_dir is non-NULL.  Missing inputs are reported per
 * entry and yield KRF_ERR_CONFIG; verdict failures yield KRF_ERR_VERDICT. */
krf_status krf_report(const char* const* paths, int count, const char* out_dir,
                      krf_result** out);

/* ---- results ----------------------------------------------------------- */

/* JSON document of the result (summary, analysis, sweep index or report
 * digest). */
const char* krf_result_json(const krf_result* r);

/* Human-readable rendering (analysis summary or report table); may be an
 * empty string for runs and sweeps. */
const char* krf_result_text(const krf_result* r);

/* Exit code for CLI use (same scale as krf_status). */
int krf_result_exit_code(const krf_result* r);

void krf_result_release(krf_result* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KRFLAB_H */
