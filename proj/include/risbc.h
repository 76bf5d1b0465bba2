#ifndef RISBC_H
#define RISBC_H

/*
 * C interface of the risbc shared library: closed-form performance
 * analysis and phase optimization for RIS-assisted bistatic backscatter
 * links, with a Monte-Carlo engine for cross-validation.
 *
 * Scenarios are opaque handles built from JSON (or presets) and executed
 * into CSV files. All functions return RISBC_OK on success; on failure
 * they return an error code and leave a thread-local message readable
 * through risbc_last_error().
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum risbc_status {
    RISBC_OK = 0,
    RISBC_ERR_INVALID_ARGUMENT = 1,
    RISBC_ERR_PARSE = 2,
    RISBC_ERR_RUNTIME = 3,
    RISBC_ERR_IO = 4
} risbc_status;

typedef struct risbc_scenario risbc_scenario;

const char* risbc_version(void);
/* Message of the most recent failure on this thread ("" if none). */
const char* risbc_last_error(void);

/* Scenario lifecycle -------------------------------------------------- */

risbc_status risbc_scenario_default(risbc_scenario** out);
risbc_status risbc_scenario_from_json(const char* json_text, risbc_scenario** out);
risbc_status risbc_scenario_from_file(const char* path, risbc_scenario** out);
/* Experiment presets; valid ids: 3, 4, 6, 7, 8, 9, 10, 11, 12. */
risbc_status risbc_scenario_figure(int figure_id, risbc_scenario** out);
void risbc_scenario_free(risbc_scenario* s);

risbc_status risbc_scenario_set_seed(risbc_scenario* s, uint64_t seed);
risbc_status risbc_scenario_set_trials(risbc_scenario* s, long long trials);
risbc_status risbc_scenario_set_out(risbc_scenario* s, const char* path);
risbc_status risbc_scenario_set_sweep(risbc_scenario* s, const char* var, double lo,
                                      double hi, int steps);
/* Serialize the scenario back to JSON. Writes up to cap bytes including
 * the terminator; *needed receives the full length (excluding the
 * terminator) regardless. */
risbc_status risbc_scenario_to_json(const risbc_scenario* s, char* buf, size_t cap,
                                    size_t* needed);

/* Commands ------------------------------------------------------------ */

/* out_csv may be NULL to use the scenario's configured output path. */
risbc_status risbc_run_analyze(const risbc_scenario* s, const char* out_csv);
risbc_status risbc_run_simulate(const risbc_scenario* s, const char* out_csv);
risbc_status risbc_run_optimize(const risbc_scenario* s, const char* out_csv);
risbc_status risbc_run_figure(const risbc_scenario* s, const char* out_csv);

/* Stateless numeric surface -------------------------------------------- */

double risbc_q_function(double x);
/* Regularized lower incomplete gamma; NaN on domain error. */
double risbc_gamma_lower_reg(double a, double x);
/* Linear path-loss ratio of the UMi model; NaN on domain error. */
double risbc_pathloss(double distance_m, double carrier_hz);

#ifdef __cplusplus
}
#endif

#endif /* RISBC_H */
