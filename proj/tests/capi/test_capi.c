/* SPDX-License-Identifier: Apache-2.0 */
/* Copyright 2026 The EoT Engine Authors */

/* Exercises the public C API from plain C. */

#include <eot/eot.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                     \
    do {                                                                 \
        if (!(cond)) {                                                   \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                  \
        }                                                                \
    } while (0)

static void test_metrics(void) {
    size_t d = 0;
    char* boxed = NULL;
    int hit = -1;
    const char* ranked[] = {"3", "5."};

    EXPECT(eot_edit_distance("kitten", "sitting", &d) == EOT_OK && d == 3);
    EXPECT(eot_edit_distance(NULL, "x", &d) == EOT_ERROR_INVALID_ARGUMENT);
    EXPECT(strlen(eot_last_error()) > 0);

    EXPECT(eot_extract_boxed("a \\boxed{1} b \\boxed{\\frac{1}{2}}", &boxed) == EOT_OK);
    EXPECT(boxed != NULL && strcmp(boxed, "\\frac{1}{2}") == 0);
    eot_string_free(boxed);
    EXPECT(eot_extract_boxed("no box", &boxed) == EOT_OK && boxed == NULL);

    EXPECT(eot_pass_at_k(ranked, 2, "5", 1, &hit) == EOT_OK && hit == 0);
    EXPECT(eot_pass_at_k(ranked, 2, "5", 2, &hit) == EOT_OK && hit == 1);
    EXPECT(eot_pass_at_k(ranked, 2, "5", 0, &hit) == EOT_ERROR_INVALID_ARGUMENT);
}

static void test_config(void) {
    eot_config* cfg = NULL;
    char* value = NULL;
    char* report = NULL;

    EXPECT(eot_config_create(&cfg) == EOT_OK);
    EXPECT(eot_config_set(cfg, "search.n", "4") == EOT_OK);
    EXPECT(eot_config_get(cfg, "search.n", &value) == EOT_OK && strcmp(value, "4") == 0);
    eot_string_free(value);
    EXPECT(eot_config_set(cfg, "search.nope", "1") == EOT_ERROR_CONFIG);
    EXPECT(strstr(eot_last_error(), "search.nope") != NULL);
    EXPECT(eot_config_load(cfg, "/nonexistent/eot.ini") == EOT_ERROR_CONFIG);

    /* No backend configured yet. */
    EXPECT(eot_config_validate(cfg, 0, &report) == EOT_ERROR_CONFIG);
    EXPECT(report != NULL && strstr(report, "no backend") != NULL);
    eot_string_free(report);

    EXPECT(eot_config_set(cfg, "backend.mock", "true") == EOT_OK);
    EXPECT(eot_config_validate(cfg, 1, &report) == EOT_OK);
    EXPECT(report != NULL && strcmp(report, "[]") == 0);
    eot_string_free(report);

    EXPECT(eot_config_to_json(cfg, &value) == EOT_OK && strstr(value, "\"search.n\"") != NULL);
    eot_string_free(value);
    eot_config_destroy(cfg);
}

static void test_session(void) {
    eot_config* cfg = NULL;
    eot_session* session = NULL;
    char* answer = NULL;
    char* json = NULL;
    const char* trace_path = "capi_trace.jsonl";
    FILE* f;
    int lines = 0;
    int ch;

    eot_config_create(&cfg);
    eot_config_set(cfg, "backend.mock", "true");
    eot_config_set(cfg, "search.t", "1");
    eot_config_set(cfg, "search.kappa", "3");

    EXPECT(eot_session_create(cfg, &session) == EOT_OK);
    EXPECT(eot_session_result_json(session, &json) == EOT_ERROR_INVALID_ARGUMENT);

    EXPECT(eot_session_ask(session, "What is 2+3?", NULL, &answer) == EOT_OK);
    EXPECT(answer != NULL && strstr(answer, "\\boxed{") != NULL);
    eot_string_free(answer);

    /* N = 3, T = 1: six candidates, 2 * 6 + 1 search calls, one aggregate. */
    EXPECT(eot_session_call_count(session) == 14);
    EXPECT(eot_session_call_count_kind(session, EOT_CALL_AGGREGATE) == 1);
    EXPECT(eot_session_call_count_kind(session, EOT_CALL_SCORE) == 6);
    EXPECT(eot_session_call_count_kind(session, EOT_CALL_GENERATE) == 3);
    EXPECT(eot_session_call_count_kind(session, EOT_CALL_REFERENCE) == 1);

    EXPECT(eot_session_result_json(session, &json) == EOT_OK && strstr(json, "\"ranked\"") != NULL);
    eot_string_free(json);

    EXPECT(eot_session_write_trace(session, trace_path) == EOT_OK);
    f = fopen(trace_path, "r");
    EXPECT(f != NULL);
    if (f) {
        while ((ch = fgetc(f)) != EOF) lines += ch == '\n';
        fclose(f);
    }
    EXPECT(lines >= 14);
    remove(trace_path);

    EXPECT(eot_session_ask(session, "q", "/nonexistent.png", &answer) == EOT_ERROR_IO);

    eot_session_destroy(session);

    /* Invalid search settings are rejected when the session is created. */
    eot_config_set(cfg, "search.m", "3");
    EXPECT(eot_session_create(cfg, &session) == EOT_ERROR_CONFIG);
    EXPECT(strstr(eot_last_error(), "nothing would survive") != NULL);
    eot_config_destroy(cfg);
}

static void test_eval(void) {
    eot_config* cfg = NULL;
    char* summary = NULL;

    eot_config_create(&cfg);
    eot_config_set(cfg, "backend.mock", "true");
    eot_config_set(cfg, "search.t", "1");
    eot_config_set(cfg, "search.kappa", "3");
    EXPECT(eot_eval(cfg, EOT_TEST_DATA_DIR "/synthetic.jsonl", "capi_eval_out", &summary) == EOT_OK);
    EXPECT(summary != NULL && strstr(summary, "\"pass_at\"") != NULL);
    eot_string_free(summary);
    EXPECT(eot_eval(cfg, "/nonexistent.jsonl", "capi_eval_out", &summary) == EOT_ERROR_IO);
    eot_config_destroy(cfg);
}

int main(void) {
    EXPECT(strcmp(eot_version(), "1.0.0") == 0);
    EXPECT(strcmp(eot_status_string(EOT_ERROR_CONFIG), "configuration error") == 0);
    test_metrics();
    test_config();
    test_session();
    test_eval();
    if (failures) fprintf(stderr, "%d check(s) failed\n", failures);
    else printf("C API checks passed\n");
    return failures ? 1 : 0;
}
