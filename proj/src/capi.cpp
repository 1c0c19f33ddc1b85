// Copyright 2026 The shadowdiff authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shadowdiff/shadowdiff.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "fixture_app.hpp"
#include "learning.hpp"
#include "proxy.hpp"
#include "reliability.hpp"
#include "rules.hpp"
#include "script_client.hpp"

namespace {

using shadowdiff::RuleSet;

void put_error(char* errbuf, size_t errbuf_len, const std::string& message) {
  if (!errbuf || errbuf_len == 0) return;
  std::size_t n = std::min(message.size(), errbuf_len - 1);
  std::memcpy(errbuf, message.data(), n);
  errbuf[n] = '\0';
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(::malloc(s.size() + 1));
  if (!out) return nullptr;
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

template <typename Fn>
sdf_status guarded(char* errbuf, size_t errbuf_len, Fn&& fn) {
  try {
    return fn();
  } catch (const shadowdiff::RuleParseError& e) {
    put_error(errbuf, errbuf_len, e.what());
    return SDF_ERROR_PARSE;
  } catch (const shadowdiff::ReliabilityError& e) {
    put_error(errbuf, errbuf_len, e.what());
    return SDF_ERROR_INSUFFICIENT_DATA;
  } catch (const std::exception& e) {
    put_error(errbuf, errbuf_len, e.what());
    return SDF_ERROR_INTERNAL;
  }
}

void fill_report(const shadowdiff::DecisionReport& in, sdf_reliability_report* out) {
  out->observation_count = in.observation_count;
  out->total_duration_s = in.total_duration;
  out->lambda_hat = in.lambda_hat;
  out->se_available = in.se.has_value() ? 1 : 0;
  out->standard_error = in.se.value_or(0.0);
  out->t_required_s = in.t_required;
  out->threshold = in.threshold;
  out->probability = in.probability;
  out->has_sensitivity =
      (in.probability_at_plus_se.has_value() && in.probability_at_minus_se.has_value()) ? 1 : 0;
  out->probability_at_plus_se = in.probability_at_plus_se.value_or(0.0);
  out->probability_at_minus_se = in.probability_at_minus_se.value_or(0.0);
  out->stop = in.stop ? 1 : 0;
}

shadowdiff::DecisionReport to_core_report(const sdf_reliability_report* in) {
  shadowdiff::DecisionReport out;
  out.observation_count = in->observation_count;
  out.total_duration = in->total_duration_s;
  out.lambda_hat = in->lambda_hat;
  if (in->se_available) out.se = in->standard_error;
  out.t_required = in->t_required_s;
  out.threshold = in->threshold;
  out.probability = in->probability;
  if (in->has_sensitivity) {
    out.probability_at_plus_se = in->probability_at_plus_se;
    out.probability_at_minus_se = in->probability_at_minus_se;
  }
  out.stop = in->stop != 0;
  return out;
}

}  // namespace

struct sdf_ruleset {
  RuleSet rules;
};

struct sdf_proxy {
  std::unique_ptr<shadowdiff::Proxy> proxy;
};

struct sdf_fixture {
  std::unique_ptr<shadowdiff::FixtureApp> fixture;
};

extern "C" {

const char* sdf_status_name(sdf_status status) {
  switch (status) {
    case SDF_OK: return "ok";
    case SDF_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case SDF_ERROR_PARSE: return "parse error";
    case SDF_ERROR_IO: return "io error";
    case SDF_ERROR_STATE: return "invalid state";
    case SDF_ERROR_INSUFFICIENT_DATA: return "insufficient data";
    case SDF_ERROR_BIND: return "bind failure";
    case SDF_ERROR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* sdf_version(void) { return "1.0.0"; }

void sdf_string_free(char* s) { ::free(s); }

sdf_status sdf_ruleset_parse(const char* text, size_t length, sdf_ruleset** out, char* errbuf,
                             size_t errbuf_len) {
  if (!text || !out) return SDF_ERROR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    std::vector<std::string> warnings;
    RuleSet rules = RuleSet::parse(std::string_view(text, length), &warnings);
    if (!warnings.empty()) {
      std::string joined;
      for (const auto& w : warnings) {
        if (!joined.empty()) joined += "; ";
        joined += w;
      }
      put_error(errbuf, errbuf_len, joined);
    }
    *out = new sdf_ruleset{std::move(rules)};
    return SDF_OK;
  });
}

sdf_status sdf_ruleset_load_file(const char* path, sdf_ruleset** out, char* errbuf,
                                 size_t errbuf_len) {
  if (!path || !out) return SDF_ERROR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    std::vector<std::string> warnings;
    RuleSet rules = RuleSet::load_file(path, &warnings);
    if (!warnings.empty()) {
      std::string joined;
      for (const auto& w : warnings) {
        if (!joined.empty()) joined += "; ";
        joined += w;
      }
      put_error(errbuf, errbuf_len, joined);
    }
    *out = new sdf_ruleset{std::move(rules)};
    return SDF_OK;
  });
}

sdf_status sdf_ruleset_serialize(const sdf_ruleset* rules, char** out_text) {
  if (!rules || !out_text) return SDF_ERROR_INVALID_ARGUMENT;
  *out_text = dup_string(rules->rules.serialize());
  return *out_text ? SDF_OK : SDF_ERROR_INTERNAL;
}

size_t sdf_ruleset_expected_count(const sdf_ruleset* rules) {
  return rules ? rules->rules.expected_differences().size() : 0;
}

size_t sdf_ruleset_characteristic_count(const sdf_ruleset* rules) {
  return rules ? rules->rules.characteristic_values().size() : 0;
}

void sdf_ruleset_free(sdf_ruleset* rules) { delete rules; }

sdf_status sdf_proxy_create(const sdf_proxy_options* options, const sdf_ruleset* rules,
                            sdf_proxy** out, char* errbuf, size_t errbuf_len) {
  if (!options || !out || !options->main_host || !options->shadow_host) {
    return SDF_ERROR_INVALID_ARGUMENT;
  }
  if (options->main_port == options->shadow_port &&
      std::string(options->main_host) == options->shadow_host) {
    put_error(errbuf, errbuf_len, "main and shadow upstreams must be distinct");
    return SDF_ERROR_INVALID_ARGUMENT;
  }
  return guarded(errbuf, errbuf_len, [&] {
    shadowdiff::ProxyConfig config;
    if (options->listen_host) config.listen_host = options->listen_host;
    config.listen_port = options->listen_port;
    config.main_upstream = {options->main_host, options->main_port};
    config.shadow_upstream = {options->shadow_host, options->shadow_port};
    config.mode = options->learning_mode ? shadowdiff::ProxyMode::learning
                                         : shadowdiff::ProxyMode::comparing;
    if (options->comparing_rate_s > 0) config.comparing_rate_s = options->comparing_rate_s;
    if (options->pair_timeout_s > 0) config.pair_timeout_s = options->pair_timeout_s;
    if (options->max_body_bytes > 0) config.max_body_bytes = options->max_body_bytes;
    if (options->diff_log_path) config.diff_log_path = options->diff_log_path;
    if (options->alarm_log_path) config.alarm_log_path = options->alarm_log_path;
    if (options->observations_path) config.observations_path = options->observations_path;
    config.print_special_output = options->print_special_output != 0;
    RuleSet ruleset = rules ? rules->rules : RuleSet();
    *out = new sdf_proxy{std::make_unique<shadowdiff::Proxy>(std::move(config),
                                                             std::move(ruleset))};
    return SDF_OK;
  });
}

sdf_status sdf_proxy_start(sdf_proxy* proxy, char* errbuf, size_t errbuf_len) {
  if (!proxy) return SDF_ERROR_INVALID_ARGUMENT;
  sdf_status status = guarded(errbuf, errbuf_len, [&] {
    proxy->proxy->start();
    return SDF_OK;
  });
  return status == SDF_ERROR_INTERNAL ? SDF_ERROR_BIND : status;
}

int sdf_proxy_port(const sdf_proxy* proxy) { return proxy ? proxy->proxy->port() : -1; }

sdf_status sdf_proxy_wait(sdf_proxy* proxy) {
  if (!proxy) return SDF_ERROR_INVALID_ARGUMENT;
  proxy->proxy->wait();
  return SDF_OK;
}

void sdf_proxy_request_stop(sdf_proxy* proxy) {
  if (proxy) proxy->proxy->request_stop();
}

sdf_status sdf_proxy_stop(sdf_proxy* proxy) {
  if (!proxy) return SDF_ERROR_INVALID_ARGUMENT;
  proxy->proxy->stop();
  return SDF_OK;
}

sdf_status sdf_proxy_get_stats(sdf_proxy* proxy, sdf_proxy_stats* out) {
  if (!proxy || !out) return SDF_ERROR_INVALID_ARGUMENT;
  shadowdiff::ProxyStats stats = proxy->proxy->stats();
  out->pairs_opened = stats.pairs_opened;
  out->pairs_completed = stats.pairs_completed;
  out->pairs_compared = stats.pairs_compared;
  out->pairs_voided = stats.pairs_voided;
  out->pairs_timed_out = stats.pairs_timed_out;
  out->verdict_equal = stats.verdict_equal;
  out->verdict_expected_only = stats.verdict_expected_only;
  out->verdict_alarm = stats.verdict_alarm;
  out->expected_differences = stats.expected_differences;
  out->unexpected_differences = stats.unexpected_differences;
  out->shadow_send_failures = stats.shadow_send_failures;
  out->protocol_errors = stats.protocol_errors;
  out->warnings = stats.warnings;
  return SDF_OK;
}

void sdf_proxy_free(sdf_proxy* proxy) { delete proxy; }

sdf_status sdf_fixture_create(const sdf_fixture_options* options, sdf_fixture** out,
                              char* errbuf, size_t errbuf_len) {
  if (!options || !out) return SDF_ERROR_INVALID_ARGUMENT;
  shadowdiff::FixtureConfig config;
  if (options->host) config.host = options->host;
  config.port = options->port;
  config.instance_seed = options->instance_seed;
  config.delay_ms = options->delay_ms;
  if (options->mutation) {
    auto mutation = shadowdiff::fixture_mutation_from_string(options->mutation);
    if (!mutation) {
      put_error(errbuf, errbuf_len,
                std::string("unknown mutation '") + options->mutation +
                    "' (expected none|status_flip|body_text_change|extra_field|missing_token)");
      return SDF_ERROR_INVALID_ARGUMENT;
    }
    config.mutation = *mutation;
  }
  *out = new sdf_fixture{std::make_unique<shadowdiff::FixtureApp>(std::move(config))};
  return SDF_OK;
}

sdf_status sdf_fixture_start(sdf_fixture* fixture, char* errbuf, size_t errbuf_len) {
  if (!fixture) return SDF_ERROR_INVALID_ARGUMENT;
  sdf_status status = guarded(errbuf, errbuf_len, [&] {
    fixture->fixture->start();
    return SDF_OK;
  });
  return status == SDF_ERROR_INTERNAL ? SDF_ERROR_BIND : status;
}

int sdf_fixture_port(const sdf_fixture* fixture) {
  return fixture ? fixture->fixture->port() : -1;
}

sdf_status sdf_fixture_stop(sdf_fixture* fixture) {
  if (!fixture) return SDF_ERROR_INVALID_ARGUMENT;
  fixture->fixture->stop();
  return SDF_OK;
}

void sdf_fixture_free(sdf_fixture* fixture) { delete fixture; }

sdf_status sdf_suggest_rules(const char* diff_log_path, unsigned min_support,
                             const char* base_rules_path, char** out_rules_text, char* errbuf,
                             size_t errbuf_len) {
  if (!diff_log_path || !out_rules_text) return SDF_ERROR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    auto records = shadowdiff::load_difference_log(diff_log_path);
    auto candidates = shadowdiff::suggest_rules(records, min_support);
    std::unique_ptr<RuleSet> base;
    if (base_rules_path) {
      base = std::make_unique<RuleSet>(RuleSet::load_file(base_rules_path));
    }
    std::string text = shadowdiff::render_rule_file(candidates, min_support, base.get());
    *out_rules_text = dup_string(text);
    return *out_rules_text ? SDF_OK : SDF_ERROR_INTERNAL;
  });
}

sdf_status sdf_reliability_from_file(const char* observations_path, double t_required_s,
                                     double threshold, sdf_reliability_report* out, char* errbuf,
                                     size_t errbuf_len) {
  if (!observations_path || !out) return SDF_ERROR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    auto log = shadowdiff::load_observations(observations_path);
    fill_report(shadowdiff::decision_report(log, t_required_s, threshold), out);
    return SDF_OK;
  });
}

sdf_status sdf_reliability_compute(const double* durations, size_t count, double t_required_s,
                                   double threshold, sdf_reliability_report* out, char* errbuf,
                                   size_t errbuf_len) {
  if ((!durations && count > 0) || !out) return SDF_ERROR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    shadowdiff::ObservationLog log;
    log.durations.assign(durations, durations + count);
    fill_report(shadowdiff::decision_report(log, t_required_s, threshold), out);
    return SDF_OK;
  });
}

sdf_status sdf_reliability_render(const sdf_reliability_report* report, char** out_text) {
  if (!report || !out_text) return SDF_ERROR_INVALID_ARGUMENT;
  *out_text = dup_string(shadowdiff::render_report(to_core_report(report)));
  return *out_text ? SDF_OK : SDF_ERROR_INTERNAL;
}

sdf_status sdf_observations_mark_restart(const char* observations_path, char* errbuf,
                                         size_t errbuf_len) {
  if (!observations_path) return SDF_ERROR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    shadowdiff::append_restart_marker(observations_path);
    return SDF_OK;
  });
}

sdf_status sdf_replay_script(const char* script_path, const char* host, int port, int workers,
                             uint64_t seed, sdf_replay_summary* out, char* errbuf,
                             size_t errbuf_len) {
  if (!script_path || !host || !out) return SDF_ERROR_INVALID_ARGUMENT;
  return guarded(errbuf, errbuf_len, [&] {
    auto steps = shadowdiff::load_script(script_path);
    shadowdiff::ReplayOptions options;
    options.host = host;
    options.port = port;
    options.seed = seed;
    auto sessions = shadowdiff::replay_script_parallel(steps, options, workers);
    sdf_replay_summary summary{0, 0, 0};
    for (const auto& session : sessions) {
      for (const auto& record : session) {
        summary.requests += 1;
        if (!record.transport_ok) {
          summary.transport_failures += 1;
        } else if (record.response.status >= 500) {
          summary.status_5xx += 1;
        }
      }
    }
    *out = summary;
    return SDF_OK;
  });
}

}  // extern "C"
