#ifndef STOKES_SPECTRA_H
#define STOKES_SPECTRA_H

/* C interface of libstokes_spectra. All functions return an ssp_status;
   on failure ssp_last_error() describes the error of the calling thread. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(STOKES_SPECTRA_BUILD)
#define SSP_API __attribute__((visibility("default")))
#else
#define SSP_API
#endif

typedef enum ssp_status {
  SSP_OK = 0,
  SSP_INVALID_ARGUMENT = 1,
  SSP_NUMERICAL_FAILURE = 2,
  SSP_IO_ERROR = 3,
  SSP_INTERNAL_ERROR = 4
} ssp_status;

typedef struct ssp_config ssp_config;
typedef struct ssp_wave ssp_wave;

SSP_API const char* ssp_version(void);
/* Message of the last failed call on this thread, "" if none. */
SSP_API const char* ssp_last_error(void);
SSP_API void ssp_string_free(char* s);

/* Configuration with every key at its default. */
SSP_API ssp_status ssp_config_create(ssp_config** out);
SSP_API void ssp_config_destroy(ssp_config* config);
/* Replaces the configuration by the defaults overlaid with a
   `key = value` file. */
SSP_API ssp_status ssp_config_load_file(ssp_config* config, const char* path);
SSP_API ssp_status ssp_config_set(ssp_config* config, const char* key, const char* value);
/* Canonical value; free with ssp_string_free. */
SSP_API ssp_status ssp_config_get(const ssp_config* config, const char* key, char** value);
SSP_API ssp_status ssp_config_serialize(const ssp_config* config, char** text);
/* Newline separated command names; free with ssp_string_free. */
SSP_API ssp_status ssp_commands(char** names);
/* Newline separated `key<TAB>default<TAB>description` lines. */
SSP_API ssp_status ssp_config_describe(char** text);

/* Runs a command and writes its CSV and JSON files into out_dir.
   SSP_INVALID_ARGUMENT and SSP_NUMERICAL_FAILURE still leave the JSON
   report with its error field. jobs >= 1. */
SSP_API ssp_status ssp_run(const char* command, const ssp_config* config, const char* out_dir,
                           int jobs);

/* Traveling wave of amplitude epsilon with the config's physics and
   stokes_N, dno_order, newton_tol, newton_max_iter. A solve that does not
   converge returns SSP_NUMERICAL_FAILURE and no handle. */
SSP_API ssp_status ssp_wave_solve(const ssp_config* config, double epsilon, ssp_wave** out);
SSP_API void ssp_wave_destroy(ssp_wave* wave);
SSP_API double ssp_wave_speed(const ssp_wave* wave);
SSP_API double ssp_wave_residual(const ssp_wave* wave);
SSP_API int ssp_wave_iterations(const ssp_wave* wave);
SSP_API int ssp_wave_truncation(const ssp_wave* wave);
/* Cosine coefficient k of eta, sine coefficient k of psi, 0 <= k <= N. */
SSP_API ssp_status ssp_wave_eta_cos(const ssp_wave* wave, int k, double* value);
SSP_API ssp_status ssp_wave_psi_sin(const ssp_wave* wave, int k, double* value);

#ifdef __cplusplus
}
#endif

#endif
