/*
 * SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The EoT Engine Authors
 *
 * C interface to the EoT engine: evolutionary multi-objective search over model
 * answers (quality x novelty), condensation of the final answer set by
 * K-Medoids clustering, aggregation into one answer, and a Pass@k harness.
 *
 * Handles are opaque. Every fallible function returns an eot_status; on failure
 * eot_last_error() describes the problem (thread-local, valid until the next
 * call on the same thread). Strings returned through char** out-parameters are
 * owned by the caller and must be released with eot_string_free().
 *
 * Typical use:
 *
 *   eot_config* cfg = NULL;
 *   eot_config_create(&cfg);
 *   eot_config_load(cfg, "eot.ini");
 *   eot_config_set(cfg, "backend.mock", "true");
 *
 *   eot_session* s = NULL;
 *   if (eot_session_create(cfg, &s) == EOT_OK) {
 *       char* answer = NULL;
 *       if (eot_session_ask(s, "What is 2 + 3?", NULL, &answer) == EOT_OK) {
 *           puts(answer);
 *           eot_string_free(answer);
 *       }
 *       eot_session_destroy(s);
 *   }
 *   eot_config_destroy(cfg);
 */

#ifndef EOT_EOT_H
#define EOT_EOT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(EOT_BUILDING_LIBRARY)
#    define EOT_API __declspec(dllexport)
#  else
#    define EOT_API __declspec(dllimport)
#  endif
#else
#  define EOT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eot_status {
    EOT_OK = 0,
    EOT_ERROR_INVALID_ARGUMENT = 1,
    EOT_ERROR_CONFIG = 2,
    EOT_ERROR_IO = 3,
    EOT_ERROR_BACKEND = 4,
    EOT_ERROR_RUNTIME = 5
} eot_status;

typedef enum eot_call_kind {
    EOT_CALL_GENERATE = 0,
    EOT_CALL_SCORE = 1,
    EOT_CALL_CROSSOVER = 2,
    EOT_CALL_MUTATE = 3,
    EOT_CALL_AGGREGATE = 4,
    EOT_CALL_REFERENCE = 5
} eot_call_kind;

typedef struct eot_config eot_config;
typedef struct eot_session eot_session;

EOT_API const char* eot_version(void);
EOT_API const char* eot_status_string(eot_status status);
EOT_API const char* eot_last_error(void);
EOT_API void eot_string_free(char* s);

/* ---- configuration ------------------------------------------------------ */

EOT_API eot_status eot_config_create(eot_config** out);
EOT_API void eot_config_destroy(eot_config* config);

/* Applies an INI or JSON config file. A missing file is EOT_ERROR_CONFIG. */
EOT_API eot_status eot_config_load(eot_config* config, const char* path);

/* Sets one dotted key, e.g. ("search.n", "6"). Unknown keys are EOT_ERROR_CONFIG. */
EOT_API eot_status eot_config_set(eot_config* config, const char* key, const char* value);
EOT_API eot_status eot_config_get(const eot_config* config, const char* key, char** value);

/* The fully resolved configuration as a JSON object of key -> string. */
EOT_API eot_status eot_config_to_json(const eot_config* config, char** json);

/*
 * Checks search parameters, backend resolution and template renderability. With
 * probe_backend != 0 and a non-mock backend, one model call is made. Writes a JSON
 * array of violation messages to *report (always set on EOT_OK or
 * EOT_ERROR_CONFIG); returns EOT_ERROR_CONFIG when the array is non-empty.
 */
EOT_API eot_status eot_config_validate(const eot_config* config, int probe_backend, char** report);

/* ---- single questions --------------------------------------------------- */

/* Resolves the backend, embedder and templates once for repeated questions. */
EOT_API eot_status eot_session_create(const eot_config* config, eot_session** out);
EOT_API void eot_session_destroy(eot_session* session);

/*
 * Runs search, ranking, condensation and aggregation for one question and writes
 * the aggregated answer. image_path may be NULL. Not safe to call concurrently on
 * the same session; use one session per thread.
 */
EOT_API eot_status eot_session_ask(eot_session* session, const char* question, const char* image_path,
                                   char** answer);

/* Details of the last successful ask: ranked candidates, clusters, call counts. */
EOT_API eot_status eot_session_result_json(const eot_session* session, char** json);

/* Ledger entries of the last ask: total, or for one kind. */
EOT_API size_t eot_session_call_count(const eot_session* session);
EOT_API size_t eot_session_call_count_kind(const eot_session* session, eot_call_kind kind);

/* Writes the last ask's run trace as JSON lines (one "call" event per ledger entry). */
EOT_API eot_status eot_session_write_trace(const eot_session* session, const char* path);

/* ---- datasets ----------------------------------------------------------- */

/*
 * Evaluates a JSONL dataset and writes results.jsonl, summary.json and timing.json
 * into out_dir (NULL: the config's eval.out). *summary receives summary.json's
 * content and may be NULL. Returns EOT_ERROR_RUNTIME when at least half of the
 * questions failed; the files are still written.
 */
EOT_API eot_status eot_eval(const eot_config* config, const char* dataset_path, const char* out_dir, char** summary);

/* ---- metrics ------------------------------------------------------------ */

/* Levenshtein distance over Unicode scalar values of two UTF-8 strings. */
EOT_API eot_status eot_edit_distance(const char* a, const char* b, size_t* out);

/* Content of the last \boxed{...}; *out is NULL when there is none. */
EOT_API eot_status eot_extract_boxed(const char* reply, char** out);

/* 1 when any of the first k answers matches truth after normalization, else 0. */
EOT_API eot_status eot_pass_at_k(const char* const* ranked, size_t count, const char* truth, int k, int* out);

#ifdef __cplusplus
}
#endif

#endif /* EOT_EOT_H */
