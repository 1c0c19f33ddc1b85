/* Copyright 2026 The shadowdiff authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* shadowdiff C API.
 *
 * A differential reverse proxy: it forwards real client traffic to an
 * unpatched "main" application instance, replicates rewritten copies to a
 * patched "shadow" instance, compares the paired responses against a rule
 * set of expected differences, raises alarms on unexpected divergence, and
 * estimates how long concurrent execution must continue before the patch
 * can be trusted.
 *
 * All handles are opaque; every function returns SDF_OK or an error code,
 * and functions taking an error buffer leave a human-readable message in it
 * on failure. The library is thread-safe per handle unless noted.
 */

#ifndef SHADOWDIFF_SHADOWDIFF_H_
#define SHADOWDIFF_SHADOWDIFF_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sdf_status {
  SDF_OK = 0,
  SDF_ERROR_INVALID_ARGUMENT = 1,
  SDF_ERROR_PARSE = 2,
  SDF_ERROR_IO = 3,
  SDF_ERROR_STATE = 4,
  SDF_ERROR_INSUFFICIENT_DATA = 5,
  SDF_ERROR_BIND = 6,
  SDF_ERROR_INTERNAL = 7
} sdf_status;

const char* sdf_status_name(sdf_status status);
const char* sdf_version(void);

/* Frees any string returned through a char** out-parameter. */
void sdf_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Rule sets                                                           */

typedef struct sdf_ruleset sdf_ruleset;

/* Parses rule-file text (':' expected differences, '+' characteristic
 * values, '#' comments). Warnings, if any, are joined into `errbuf` even on
 * success. */
sdf_status sdf_ruleset_parse(const char* text, size_t length, sdf_ruleset** out,
                             char* errbuf, size_t errbuf_len);
sdf_status sdf_ruleset_load_file(const char* path, sdf_ruleset** out,
                                 char* errbuf, size_t errbuf_len);
sdf_status sdf_ruleset_serialize(const sdf_ruleset* rules, char** out_text);
size_t sdf_ruleset_expected_count(const sdf_ruleset* rules);
size_t sdf_ruleset_characteristic_count(const sdf_ruleset* rules);
void sdf_ruleset_free(sdf_ruleset* rules);

/* ------------------------------------------------------------------ */
/* Proxy                                                               */

typedef struct sdf_proxy sdf_proxy;

typedef struct sdf_proxy_options {
  const char* listen_host;   /* default 127.0.0.1 */
  int listen_port;           /* 0 binds an ephemeral port */
  const char* main_host;
  int main_port;
  const char* shadow_host;
  int shadow_port;
  int learning_mode;         /* 0 = comparing, 1 = learning */
  double comparing_rate_s;   /* <= 0 selects the 1 s default */
  double pair_timeout_s;     /* <= 0 selects the 30 s default */
  size_t max_body_bytes;     /* 0 selects the 16 MiB default */
  const char* diff_log_path;     /* learning output, optional */
  const char* alarm_log_path;    /* comparing output, optional */
  const char* observations_path; /* reliability observations output, optional */
  int print_special_output;  /* learning mode: render differences to stdout */
} sdf_proxy_options;

sdf_status sdf_proxy_create(const sdf_proxy_options* options, const sdf_ruleset* rules,
                            sdf_proxy** out, char* errbuf, size_t errbuf_len);
/* Binds and serves on background threads. */
sdf_status sdf_proxy_start(sdf_proxy* proxy, char* errbuf, size_t errbuf_len);
/* Port actually bound (after start). */
int sdf_proxy_port(const sdf_proxy* proxy);
/* Blocks until sdf_proxy_request_stop is called, then drains and stops. */
sdf_status sdf_proxy_wait(sdf_proxy* proxy);
/* Async-signal-safe stop request. */
void sdf_proxy_request_stop(sdf_proxy* proxy);
/* Stops accepting, compares what completed, joins all threads. */
sdf_status sdf_proxy_stop(sdf_proxy* proxy);

typedef struct sdf_proxy_stats {
  uint64_t pairs_opened;
  uint64_t pairs_completed;
  uint64_t pairs_compared;
  uint64_t pairs_voided;
  uint64_t pairs_timed_out;
  uint64_t verdict_equal;
  uint64_t verdict_expected_only;
  uint64_t verdict_alarm;
  uint64_t expected_differences;
  uint64_t unexpected_differences;
  uint64_t shadow_send_failures;
  uint64_t protocol_errors;
  uint64_t warnings;
} sdf_proxy_stats;

sdf_status sdf_proxy_get_stats(sdf_proxy* proxy, sdf_proxy_stats* out);
void sdf_proxy_free(sdf_proxy* proxy);

/* ------------------------------------------------------------------ */
/* Fixture application (demo twin instance)                            */

typedef struct sdf_fixture sdf_fixture;

typedef struct sdf_fixture_options {
  const char* host;     /* default 127.0.0.1 */
  int port;             /* 0 binds an ephemeral port */
  uint64_t instance_seed;
  const char* mutation; /* none|status_flip|body_text_change|extra_field|missing_token */
  int delay_ms;         /* artificial latency on every response */
} sdf_fixture_options;

sdf_status sdf_fixture_create(const sdf_fixture_options* options, sdf_fixture** out,
                              char* errbuf, size_t errbuf_len);
sdf_status sdf_fixture_start(sdf_fixture* fixture, char* errbuf, size_t errbuf_len);
int sdf_fixture_port(const sdf_fixture* fixture);
sdf_status sdf_fixture_stop(sdf_fixture* fixture);
void sdf_fixture_free(sdf_fixture* fixture);

/* ------------------------------------------------------------------ */
/* Rule learning                                                       */

/* Reads a difference log (JSON lines written in learning mode), groups
 * recurring difference contexts, and renders a candidate rule file.
 * `base_rules_path` (optional, may be NULL) carries existing rules over
 * into the output. */
sdf_status sdf_suggest_rules(const char* diff_log_path, unsigned min_support,
                             const char* base_rules_path, char** out_rules_text,
                             char* errbuf, size_t errbuf_len);

/* ------------------------------------------------------------------ */
/* Reliability                                                         */

typedef struct sdf_reliability_report {
  uint64_t observation_count;
  double total_duration_s;
  double lambda_hat;          /* estimated difference rate, 1/s */
  int se_available;
  double standard_error;      /* valid when se_available */
  double t_required_s;
  double threshold;
  double probability;         /* P(no difference within t_required) */
  int has_sensitivity;
  double probability_at_plus_se;
  double probability_at_minus_se;
  int stop;                   /* 1 = stop concurrent execution */
} sdf_reliability_report;

sdf_status sdf_reliability_from_file(const char* observations_path, double t_required_s,
                                     double threshold, sdf_reliability_report* out,
                                     char* errbuf, size_t errbuf_len);
sdf_status sdf_reliability_compute(const double* durations, size_t count, double t_required_s,
                                   double threshold, sdf_reliability_report* out,
                                   char* errbuf, size_t errbuf_len);
/* Renders a report the way the CLI prints it. */
sdf_status sdf_reliability_render(const sdf_reliability_report* report, char** out_text);
/* Appends a restart marker to the observations file. */
sdf_status sdf_observations_mark_restart(const char* observations_path,
                                         char* errbuf, size_t errbuf_len);

/* ------------------------------------------------------------------ */
/* Script replay (demo traffic driver)                                 */

typedef struct sdf_replay_summary {
  uint64_t requests;
  uint64_t transport_failures;
  uint64_t status_5xx;
} sdf_replay_summary;

sdf_status sdf_replay_script(const char* script_path, const char* host, int port, int workers,
                             uint64_t seed, sdf_replay_summary* out,
                             char* errbuf, size_t errbuf_len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SHADOWDIFF_SHADOWDIFF_H_ */
