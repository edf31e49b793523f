/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to the qmht library. All objects are opaque handles released by
 * the matching *_free function. Functions returning qmht_status leave a
 * message for qmht_last_error() on failure.
 */
#ifndef QMHT_QMHT_H
#define QMHT_QMHT_H

#include <stddef.h>

#if defined(QMHT_BUILDING_LIBRARY)
#define QMHT_API __attribute__((visibility("default")))
#else
#define QMHT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  QMHT_OK = 0,
  QMHT_ERR_INTERNAL = 1,
  QMHT_ERR_PARSE = 2,     /* malformed input or invalid combination */
  QMHT_ERR_LIMIT = 3,     /* d^n above the dense limit */
  QMHT_ERR_NUMERICAL = 4  /* numerical consistency failure */
} qmht_status;

typedef struct qmht_scenario qmht_scenario;
typedef struct qmht_report qmht_report;
typedef struct qmht_chernoff qmht_chernoff;
typedef struct qmht_li qmht_li;

/* Message of the last failure on the calling thread, "" if none. */
QMHT_API const char* qmht_last_error(void);

/* Current d^n cap. The override set here wins over QMHT_DENSE_LIMIT; 0 clears it. */
QMHT_API size_t qmht_dense_limit(void);
QMHT_API void qmht_set_dense_limit(size_t limit);

QMHT_API qmht_status qmht_scenario_load(const char* path, qmht_scenario** out);
QMHT_API qmht_status qmht_scenario_parse(const char* json_text, qmht_scenario** out);
QMHT_API void qmht_scenario_free(qmht_scenario* sc);
QMHT_API size_t qmht_scenario_state_count(const qmht_scenario* sc);
QMHT_API size_t qmht_scenario_dimension(const qmht_scenario* sc);
QMHT_API int qmht_scenario_n_min(const qmht_scenario* sc);
QMHT_API int qmht_scenario_n_max(const qmht_scenario* sc);
QMHT_API size_t qmht_scenario_warning_count(const qmht_scenario* sc);
QMHT_API const char* qmht_scenario_warning(const qmht_scenario* sc, size_t k);

typedef struct {
  int n;
  const char* detector; /* owned by the report */
  double err;
  double exponent;
  double lemma3_bound; /* valid when has_lemma3_bound */
  double lambda_min_gram;
  double epsilon;
  int has_lemma3_bound;
  int has_lambda_min_gram;
  int has_epsilon;
} qmht_row;

QMHT_API qmht_status qmht_run(const qmht_scenario* sc, qmht_report** out);
QMHT_API void qmht_report_free(qmht_report* rep);
QMHT_API size_t qmht_report_row_count(const qmht_report* rep);
QMHT_API qmht_status qmht_report_row(const qmht_report* rep, size_t k, qmht_row* out);
QMHT_API double qmht_report_qcb_xi(const qmht_report* rep);
/* format is "csv" or "json". */
QMHT_API qmht_status qmht_report_write(const qmht_report* rep, const char* path, const char* format);
/* Heap string released with qmht_string_free. */
QMHT_API qmht_status qmht_report_render(const qmht_report* rep, const char* format, char** out);
QMHT_API void qmht_string_free(char* s);

typedef struct {
  int i; /* 1-based */
  int j;
  double xi;
  double s_star;
  double q_star;
} qmht_pair_bound;

QMHT_API qmht_status qmht_chernoff_compute(const qmht_scenario* sc, qmht_chernoff** out);
QMHT_API void qmht_chernoff_free(qmht_chernoff* c);
QMHT_API size_t qmht_chernoff_pair_count(const qmht_chernoff* c);
QMHT_API qmht_status qmht_chernoff_pair(const qmht_chernoff* c, size_t k, qmht_pair_bound* out);
/* Minimum over pairs and the 1-based argmin pair. */
QMHT_API qmht_status qmht_chernoff_min(const qmht_chernoff* c, double* xi, int* i, int* j);

typedef struct {
  int i; /* 1-based */
  int j;
  double lambda_max;
  int holds;
} qmht_li_pair;

/* Pairwise support test; when every pair passes, also the Gram sequence for
 * n in [n_min, n_max] of the scenario. */
QMHT_API qmht_status qmht_check_li(const qmht_scenario* sc, qmht_li** out);
QMHT_API void qmht_li_free(qmht_li* li);
QMHT_API size_t qmht_li_pair_count(const qmht_li* li);
QMHT_API qmht_status qmht_li_pair_result(const qmht_li* li, size_t k, qmht_li_pair* out);
QMHT_API size_t qmht_li_gram_count(const qmht_li* li);
QMHT_API qmht_status qmht_li_gram(const qmht_li* li, size_t k, int* n, double* lambda_min);

#ifdef __cplusplus
}
#endif

#endif
