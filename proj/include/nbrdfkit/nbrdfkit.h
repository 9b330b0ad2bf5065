/* Copyright 2026 The nbrdfkit Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to nbrdfkit. It covers tabulated and neural BRDFs plus the
 * experiment commands built on them.
 *
 * Every function that can fail returns an nbk_status. On failure the
 * message is available from nbk_last_error() on the calling thread until
 * the next call into the library. Handles are opaque and owned by the
 * caller; release them with the matching *_free function (NULL is fine).
 */
#ifndef NBRDFKIT_NBRDFKIT_H
#define NBRDFKIT_NBRDFKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NBK_API __declspec(dllexport)
#elif defined(NBK_BUILDING_LIBRARY)
#define NBK_API __attribute__((visibility("default")))
#else
#define NBK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nbk_status {
    NBK_OK = 0,
    NBK_ERR_FORMAT = 1,
    NBK_ERR_IO = 2,
    NBK_ERR_DOMAIN = 3,
    NBK_ERR_SHAPE = 4,
    NBK_ERR_STATE = 5,
    NBK_ERR_NUMERIC = 6,
    NBK_ERR_CONFIG = 7,
    NBK_ERR_USAGE = 8,
    /* A multi-item command finished but at least one item failed. */
    NBK_ERR_PARTIAL = 9,
    NBK_ERR_INTERNAL = 10
} nbk_status;

typedef struct nbk_config nbk_config;
typedef struct nbk_brdf nbk_brdf;
typedef struct nbk_nbrdf nbk_nbrdf;

NBK_API const char* nbk_version(void);
NBK_API const char* nbk_last_error(void);
NBK_API const char* nbk_status_name(nbk_status status);

/* Configuration: flat key/value store with defaults for every key. */
NBK_API nbk_status nbk_config_new(nbk_config** out);
NBK_API void nbk_config_free(nbk_config* cfg);
NBK_API nbk_status nbk_config_set(nbk_config* cfg, const char* key, const char* value);
NBK_API nbk_status nbk_config_apply_file(nbk_config* cfg, const char* path);
/* Applies NBK_<KEY> environment variables. */
NBK_API nbk_status nbk_config_apply_env(nbk_config* cfg);
/* Copies the value (NUL terminated) into buf; *needed receives the size
 * including the terminator. A too-small buffer yields NBK_ERR_SHAPE. */
NBK_API nbk_status nbk_config_get(const nbk_config* cfg, const char* key, char* buf, size_t size, size_t* needed);
NBK_API nbk_status nbk_config_echo(const nbk_config* cfg, char* buf, size_t size, size_t* needed);
/* Number of keys and the i-th key name (static storage). */
NBK_API size_t nbk_config_key_count(void);
NBK_API const char* nbk_config_key(size_t index);
NBK_API const char* nbk_config_key_help(size_t index);

/* Tabulated materials on the 90 x 90 x 180 half/difference grid. */
NBK_API nbk_status nbk_brdf_load(const char* path, nbk_brdf** out);
NBK_API nbk_status nbk_brdf_save(const nbk_brdf* brdf, const char* path);
NBK_API nbk_status nbk_brdf_phong(const char* name, const double kd[3], const double ks[3], double exponent,
                                  nbk_brdf** out);
NBK_API void nbk_brdf_free(nbk_brdf* brdf);
/* Linear RGB at the given angles; *valid is 0 for masked cells. */
NBK_API nbk_status nbk_brdf_lookup(const nbk_brdf* brdf, double theta_h, double theta_d, double phi_d, double rgb[3],
                                   int* valid);

/* Neural BRDF fields. */
NBK_API nbk_status nbk_nbrdf_load(const char* path, nbk_nbrdf** out);
NBK_API void nbk_nbrdf_free(nbk_nbrdf* w);
NBK_API nbk_status nbk_nbrdf_eval(const nbk_nbrdf* w, double theta_h, double theta_d, double phi_d, double rgb[3]);

/* Experiment commands. Progress goes to stderr when verbose is nonzero.
 * Path lists may be empty (count 0) to use the configured dataset. */
NBK_API nbk_status nbk_cmd_synth(const nbk_config* cfg, int verbose);
NBK_API nbk_status nbk_cmd_fit(const nbk_config* cfg, int verbose);
NBK_API nbk_status nbk_cmd_train(const nbk_config* cfg, int resume, int verbose);
NBK_API nbk_status nbk_cmd_reconstruct(const nbk_config* cfg, const char* checkpoint, const char* const* materials,
                                       size_t count, int verbose);
NBK_API nbk_status nbk_cmd_edit(const nbk_config* cfg, const char* checkpoint, const char* material_a,
                                const char* material_b, int verbose);
NBK_API nbk_status nbk_cmd_edit_batch(const nbk_config* cfg, const char* checkpoint, int verbose);
NBK_API nbk_status nbk_cmd_analyze_freq(const nbk_config* cfg, const char* const* inputs, size_t count, int verbose);
NBK_API nbk_status nbk_cmd_report(const nbk_config* cfg, const char* const* csvs, size_t count, int verbose);

#ifdef __cplusplus
}
#endif

#endif /* NBRDFKIT_NBRDFKIT_H */
