/* C interface to the pilot-wave quantum Brownian motion library.
 *
 * All entry points return a qbm_status; on any failure qbm_last_error()
 * holds a thread-local description. Opaque handles are created and released
 * with the matching *_create / *_free pair.
 */
#ifndef QBM_H
#define QBM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QBM_API __declspec(dllexport)
#else
#define QBM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qbm_status {
    QBM_OK = 0,
    QBM_ERR_PARAM = 2,     /* invalid parameters / configuration */
    QBM_ERR_NUMERIC = 3,   /* stability guard refused the run */
    QBM_ERR_CHECK = 4,     /* acceptance check failed */
    QBM_ERR_IO = 5,        /* filesystem problem */
    QBM_ERR_INTERNAL = 6
} qbm_status;

QBM_API const char* qbm_version(void);
QBM_API const char* qbm_last_error(void);

/* ---- oscillator bath ---------------------------------------------------- */

typedef struct qbm_bath qbm_bath;
typedef struct qbm_bath_sample qbm_bath_sample;

/* cutoff_shape: "sharp" or "lorentzian"; freq_max <= 0 selects the default
 * (cutoff for sharp, 30*cutoff for lorentzian). */
QBM_API qbm_status qbm_bath_create_ohmic(double gamma0, double cutoff,
                                         size_t n_modes, const char* cutoff_shape,
                                         double freq_max, qbm_bath** out);
QBM_API void qbm_bath_free(qbm_bath* bath);
QBM_API qbm_status qbm_bath_load(const char* path, qbm_bath** out);
QBM_API qbm_status qbm_bath_save(const qbm_bath* bath, const char* path);
QBM_API size_t qbm_bath_n_modes(const qbm_bath* bath);
QBM_API qbm_status qbm_bath_memory_kernel(const qbm_bath* bath, double tau, double* out);
QBM_API qbm_status qbm_bath_zpf_constant(const qbm_bath* bath, double* out);

/* Thermal bath realization (coherent amplitudes, phases, offsets). */
QBM_API qbm_status qbm_bath_sample_thermal(const qbm_bath* bath, double temperature,
                                           uint64_t seed, double t0,
                                           qbm_bath_sample** out);
QBM_API void qbm_bath_sample_free(qbm_bath_sample* sample);
QBM_API qbm_status qbm_bath_force(const qbm_bath* bath, const qbm_bath_sample* sample,
                                  double t, double* out);

/* ---- coherent-state closed forms ---------------------------------------- */

typedef struct qbm_coherent_state {
    double mass;
    double omega;
    double amp0;    /* |alpha(t0)| */
    double sigma;   /* phase, [0, 2pi) */
    double t0;
    double offset;  /* Bohmian offset u */
} qbm_coherent_state;

QBM_API qbm_status qbm_coherent_guidance_velocity(const qbm_coherent_state* s,
                                                  double t, double* out);
QBM_API qbm_status qbm_coherent_trajectory_position(const qbm_coherent_state* s,
                                                    double t, double* out);
QBM_API qbm_status qbm_coherent_quantum_potential(const qbm_coherent_state* s,
                                                  double x, double t, double* out);
QBM_API qbm_status qbm_coherent_particle_energy(const qbm_coherent_state* s,
                                                double t, double* out);
QBM_API qbm_status qbm_coherent_wavefunction(const qbm_coherent_state* s,
                                             double x, double t,
                                             double* amplitude, double* phase);
QBM_API qbm_status qbm_coherent_two_time_correlator(const qbm_coherent_state* s,
                                                    double t, double tau,
                                                    double* re, double* im);

/* ---- experiment harness -------------------------------------------------- */

/* config_json: experiment configuration object; pass "{}" for defaults.
 * The resolved manifest, data CSVs and summary.jsonl are written under
 * out_dir. If summary_buf is non-NULL the summary JSON record is copied into
 * it (truncated to summary_cap, always NUL-terminated). */
QBM_API qbm_status qbm_run_experiment(const char* experiment, const char* config_json,
                                      uint64_t seed, int workers, const char* out_dir,
                                      char* summary_buf, size_t summary_cap);

/* Sweep one numeric parameter over `values`. */
QBM_API qbm_status qbm_run_sweep(const char* experiment, const char* config_json,
                                 const char* axis, const double* values, size_t n_values,
                                 uint64_t seed, int workers, const char* out_dir,
                                 char* summary_buf, size_t summary_cap);

/* Runs the acceptance suite; prints one line per criterion to stdout and
 * writes acceptance.jsonl under out_dir (if non-NULL). Returns QBM_OK when
 * every criterion passes, QBM_ERR_CHECK otherwise; *n_failed (optional)
 * receives the failure count. */
QBM_API qbm_status qbm_run_acceptance(int workers, const char* out_dir, int* n_failed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QBM_H */
