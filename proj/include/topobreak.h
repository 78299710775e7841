/* C API for the topobreak shared library.
 *
 * All entry points are thread-compatible: distinct tb_config handles may be
 * used from distinct threads. Errors are reported as status codes; the
 * message for the most recent failure on the calling thread is available via
 * tb_last_error().
 */
#ifndef TOPOBREAK_H
#define TOPOBREAK_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tb_status {
  TB_OK = 0,
  TB_ERR_CONFIG = 2,
  TB_ERR_NUMERIC = 3,
  TB_ERR_IO = 4
} tb_status;

typedef struct tb_config tb_config;

const char* tb_version(void);

/* Message for the most recent error on this thread; empty string if none. */
const char* tb_last_error(void);

/* Load / parse a config; on success *out owns a new handle. */
tb_status tb_config_load(const char* path, tb_config** out);
tb_status tb_config_parse(const char* text, tb_config** out);
void tb_config_free(tb_config* cfg);

/* Canonical serialized form; the returned buffer lives until the next call
 * on the same handle or tb_config_free. */
const char* tb_config_serialize(tb_config* cfg);

/* Command-line overrides applied on top of the file. */
tb_status tb_config_set_seed(tb_config* cfg, uint64_t seed);
tb_status tb_config_set_replications(tb_config* cfg, long reps);
tb_status tb_config_set_threads(tb_config* cfg, int threads);
tb_status tb_config_set_out_dir(tb_config* cfg, const char* dir);

/* Batch commands; each writes its artifacts plus a manifest to out_dir. */
tb_status tb_run_stability(tb_config* cfg);
tb_status tb_run_critvals(tb_config* cfg);
tb_status tb_run_test(tb_config* cfg);
tb_status tb_run_approx(tb_config* cfg);
tb_status tb_run_simulate(tb_config* cfg);

#ifdef __cplusplus
}
#endif

#endif /* TOPOBREAK_H */
