/* vplate: boundary-control toolkit for viscoelastic plates.
 *
 * C interface over the core library: opaque handles, integer status
 * codes, no exceptions across the boundary.  Status values double as the
 * CLI exit codes.  On any non-OK status a thread-local message is
 * available from vplate_last_error().
 */
#ifndef VPLATE_H
#define VPLATE_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vplate_status {
  VPLATE_OK = 0,
  VPLATE_ERR_CONFIG = 2,          /* bad config text, key or value */
  VPLATE_ERR_STABILITY = 3,       /* lambda_max * dt > 2 */
  VPLATE_ERR_GRAM_DEGENERATE = 4, /* Gram matrix at/below degeneracy threshold */
  VPLATE_ERR_IO = 5,              /* file system problem */
  VPLATE_ERR_INVALID = 6          /* invalid argument / internal precondition */
} vplate_status;

/* Library version, e.g. "0.1.0". */
const char* vplate_version(void);

/* Message of the most recent failure on this thread; "" when the last
 * call succeeded.  The pointer stays valid until the next call on the
 * same thread. */
const char* vplate_last_error(void);

/* ------------------------------------------------------------------ */
/* Experiment configuration                                            */

typedef struct vplate_config vplate_config;

/* Parse a key=value config file / text.  On success *out owns a handle
 * to be released with vplate_config_free. */
vplate_status vplate_config_load(const char* path, vplate_config** out);
vplate_status vplate_config_parse(const char* text, vplate_config** out);
void vplate_config_free(vplate_config* cfg);

/* Set one key (same syntax as a config line value). */
vplate_status vplate_config_set(vplate_config* cfg, const char* key, const char* value);

/* Canonical text of one key's value.  Writes at most buflen bytes
 * including the terminator; fails with VPLATE_ERR_INVALID if the buffer
 * is too small (needed size reported via vplate_last_error). */
vplate_status vplate_config_get(const vplate_config* cfg, const char* key,
                                char* buf, size_t buflen);

/* ------------------------------------------------------------------ */
/* Experiment runners: write CSV artifacts plus manifest into out_dir.  */

vplate_status vplate_run_resolvent(const vplate_config* cfg, const char* out_dir);
vplate_status vplate_run_simulate(const vplate_config* cfg, const char* out_dir);
vplate_status vplate_run_control(const vplate_config* cfg, const char* out_dir,
                                 int visco);
vplate_status vplate_run_diagnostics(const vplate_config* cfg, const char* out_dir);

/* ------------------------------------------------------------------ */
/* Resolvent kernel handle                                             */

typedef struct vplate_resolvent vplate_resolvent;

/* prony: flat array [gamma_1, delta_1, ..., gamma_n, delta_n]; n_terms
 * may be 0 (elastic limit).  Grid: n_steps subintervals on [0, horizon],
 * so each sample array has n_steps + 1 entries. */
vplate_status vplate_resolvent_compute(const double* prony, size_t n_terms,
                                       double horizon, size_t n_steps,
                                       vplate_resolvent** out);

/* MacCamy constants a = R(0), b = R'(0), and K(0) = R''(0). */
vplate_status vplate_resolvent_constants(const vplate_resolvent* r, double* a,
                                         double* b, double* k0);

/* Copy samples of R (which = 0), R' (1) or R'' (2); buf must hold
 * n_steps + 1 doubles. */
vplate_status vplate_resolvent_samples(const vplate_resolvent* r, int which,
                                       double* buf, size_t buflen);

void vplate_resolvent_free(vplate_resolvent* r);

#ifdef __cplusplus
}
#endif

#endif /* VPLATE_H */
