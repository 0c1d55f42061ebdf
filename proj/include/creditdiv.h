/* creditdiv - C API for the correlated-default divergence simulator.
 *
 * All functions return cd_status; CD_OK is 0. On failure a thread-local
 * message describing the error is available via cd_last_error(). Objects
 * returned through out-parameters are owned by the caller and released
 * with the matching _destroy function.
 */
#ifndef CREDITDIV_H
#define CREDITDIV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cd_status {
    CD_OK = 0,
    CD_ERR_INVALID_ARGUMENT = 1,
    CD_ERR_NOT_POSITIVE_DEFINITE = 2,
    CD_ERR_BAND_INFEASIBLE = 3,
    CD_ERR_DEGENERATE = 4,
    CD_ERR_DOMAIN = 5,
    CD_ERR_CONFIG = 6,
    CD_ERR_IO = 7,
    CD_ERR_NUMERICAL = 8
} cd_status;

const char* cd_version(void);
const char* cd_status_name(cd_status status);
/* Message for the most recent failure on this thread; empty string if none. */
const char* cd_last_error(void);

/* ------------------------------------------------------------------ */
/* Experiment configuration (flat key = value model).                  */

typedef struct cd_config cd_config;

cd_config* cd_config_create(void);
void cd_config_destroy(cd_config* config);
cd_status cd_config_load_file(cd_config* config, const char* path);
cd_status cd_config_set(cd_config* config, const char* key, const char* value);
/* Writes the value into buf (NUL-terminated, truncated if needed). */
cd_status cd_config_get(const cd_config* config, const char* key, char* buf, size_t buflen);
/* "desk" or "paper". */
cd_status cd_config_apply_profile(cd_config* config, const char* profile);

/* Runs the full grid and writes table1.csv, table2.csv, figure1.csv and
 * manifest.txt into out_dir. workers >= 1; output is identical for any
 * worker count. */
cd_status cd_run_grid(const cd_config* config, const char* out_dir, int workers);

/* ------------------------------------------------------------------ */
/* Random banded correlation matrices.                                 */

typedef struct cd_matrix cd_matrix;

/* Default band bounds for a regime name ("high" or "low"). */
cd_status cd_default_band(const char* regime, double* rho_min, double* rho_max);

/* Generates a random positive definite correlation matrix whose
 * off-diagonal magnitudes lie in [rho_min, rho_max]. */
cd_status cd_matrix_generate(int dim, double rho_min, double rho_max, uint64_t seed, cd_matrix** out);
void cd_matrix_destroy(cd_matrix* matrix);
int cd_matrix_dim(const cd_matrix* matrix);
cd_status cd_matrix_entry(const cd_matrix* matrix, int i, int j, double* out);
cd_status cd_matrix_min_eigenvalue(const cd_matrix* matrix, double* out);
/* Row-major CSV, full matrix, 17 significant digits. */
cd_status cd_matrix_write_csv(const cd_matrix* matrix, const char* path);

/* ------------------------------------------------------------------ */
/* Divergence measures.                                                 */

/* Jeffreys divergence between Bernoulli(p) and Bernoulli(q); j, kl_fwd and
 * kl_bwd may each be NULL. */
cd_status cd_jeffreys_bernoulli(double p, double q, double* j, double* kl_fwd, double* kl_bwd);

/* Jeffreys divergence between two normal densities (equivalently their
 * log-normal images on (0, inf)). */
cd_status cd_jeffreys_normal(double mu1, double var1, double mu2, double var2, double* j,
                             double* kl_fwd, double* kl_bwd);

#ifdef __cplusplus
}
#endif

#endif /* CREDITDIV_H */
