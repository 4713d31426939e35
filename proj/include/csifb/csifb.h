// SPDX-License-Identifier: Apache-2.0
//
// csifb - CSI feedback simulator for wideband FDD massive MIMO
// Copyright (C) 2026 The csifb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/* C interface to the csifb simulator. All functions report failures through
 * csifb_status; csifb_last_error() returns the message of the most recent
 * failure on the calling thread. */

#ifndef CSIFB_H
#define CSIFB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CSIFB_API __declspec(dllexport)
#else
#define CSIFB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csifb_status
{
    CSIFB_OK = 0,
    CSIFB_E_ARGUMENT = 1,     /* null pointer or out-of-range argument */
    CSIFB_E_CONFIG = 2,       /* invalid spec or parameters */
    CSIFB_E_INFEASIBLE = 3,   /* request below a hard bound */
    CSIFB_E_NUMERICAL = 4,    /* ill-conditioned linear algebra */
    CSIFB_E_IO = 5,           /* file could not be read or written */
    CSIFB_E_CELL_FAILURES = 6, /* run finished but some cells failed */
    CSIFB_E_INTERNAL = 7
} csifb_status;

typedef struct csifb_experiment csifb_experiment;
typedef struct csifb_results csifb_results;

typedef struct csifb_record
{
    const char *scheme; /* "rd", "ecsq", "af" or "cs" */
    double snr_db;
    int beta_tr;
    int beta_fb;
    double mse_avg;
    double mse_avg_db;
    double sum_rate; /* NaN when rates are off */
    double bits_used;
    uint64_t seed;
    const char *error; /* empty string on success */
} csifb_record;

CSIFB_API const char *csifb_version(void);
CSIFB_API const char *csifb_last_error(void);
CSIFB_API const char *csifb_status_string(csifb_status status);

CSIFB_API csifb_status csifb_experiment_load(const char *path, csifb_experiment **out);
CSIFB_API csifb_status csifb_experiment_parse(const char *json_text, csifb_experiment **out);
CSIFB_API csifb_status csifb_experiment_set_seed(csifb_experiment *exp, uint64_t seed);
/* Borrowed strings, valid while exp lives. */
CSIFB_API csifb_status csifb_experiment_outputs(const csifb_experiment *exp, const char **csv, const char **summary);
CSIFB_API void csifb_experiment_free(csifb_experiment *exp);

/* threads <= 0 uses the hardware concurrency. On CSIFB_E_CELL_FAILURES *out is
 * still set and holds the partial table. */
CSIFB_API csifb_status csifb_run(const csifb_experiment *exp, int threads, csifb_results **out);

CSIFB_API size_t csifb_results_count(const csifb_results *res);
CSIFB_API csifb_status csifb_results_get(const csifb_results *res, size_t index, csifb_record *out);
CSIFB_API size_t csifb_results_error_count(const csifb_results *res);
CSIFB_API const char *csifb_results_error(const csifb_results *res, size_t index);
CSIFB_API csifb_status csifb_results_write_csv(const csifb_results *res, const char *path);
CSIFB_API csifb_status csifb_results_write_summary(const csifb_results *res, const char *path);
CSIFB_API void csifb_results_free(csifb_results *res);

CSIFB_API csifb_status csifb_qse_rd(int rank, int beta_tr, int beta_fb, double *out);
CSIFB_API csifb_status csifb_qse_af(int rank, int beta_tr, int beta_fb, double *out);
CSIFB_API csifb_status csifb_cs_feedback_bits(int s0, int b, int64_t grid_angle, int64_t grid_delay, int64_t *out);

/* Reverse water-filling on eigenvalues (any order): rate in bits for a total
 * excess distortion target. */
CSIFB_API csifb_status csifb_water_fill_rate(const double *eig, size_t n, double excess, double *out);

/* Generates synthetic multipath statistics and writes them to path. */
CSIFB_API csifb_status csifb_generate_statistics(int M, int N, int paths, double f_s, double tau_max, uint64_t seed,
                                                 const char *path);

#ifdef __cplusplus
}
#endif

#endif
