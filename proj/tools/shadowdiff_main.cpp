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

// Command-line front end; everything goes through the shared-library C API.

#include <csignal>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shadowdiff/shadowdiff.h"

namespace {

volatile std::sig_atomic_t g_signal = 0;
sdf_proxy* g_proxy = nullptr;

void on_signal(int) {
  g_signal = 1;
  if (g_proxy) sdf_proxy_request_stop(g_proxy);
}

constexpr int kUsageExit = 2;

struct HostPort {
  std::string host = "127.0.0.1";
  int port = 0;
};

// "host:port" or bare "port"
bool parse_host_port(const std::string& text, HostPort& out) {
  std::size_t colon = text.rfind(':');
  try {
    if (colon == std::string::npos) {
      out.port = std::stoi(text);
      return true;
    }
    out.host = text.substr(0, colon);
    out.port = std::stoi(text.substr(colon + 1));
    return !out.host.empty();
  } catch (...) {
    return false;
  }
}

// "500ms", "30s", "2m", "1.5h", bare seconds
bool parse_duration(const std::string& text, double& seconds) {
  if (text.empty()) return false;
  std::size_t unit_pos = text.size();
  while (unit_pos > 0 && !isdigit(static_cast<unsigned char>(text[unit_pos - 1])) &&
         text[unit_pos - 1] != '.') {
    --unit_pos;
  }
  std::string number = text.substr(0, unit_pos);
  std::string unit = text.substr(unit_pos);
  try {
    double value = std::stod(number);
    if (unit.empty() || unit == "s") {
      seconds = value;
    } else if (unit == "ms") {
      seconds = value / 1000.0;
    } else if (unit == "m" || unit == "min") {
      seconds = value * 60.0;
    } else if (unit == "h") {
      seconds = value * 3600.0;
    } else if (unit == "d") {
      seconds = value * 86400.0;
    } else {
      return false;
    }
    return seconds >= 0;
  } catch (...) {
    return false;
  }
}

void print_stats(const sdf_proxy_stats& stats) {
  std::printf("pairs opened:           %llu\n", static_cast<unsigned long long>(stats.pairs_opened));
  std::printf("pairs completed:        %llu\n",
              static_cast<unsigned long long>(stats.pairs_completed));
  std::printf("pairs compared:         %llu\n",
              static_cast<unsigned long long>(stats.pairs_compared));
  std::printf("  equal:                %llu\n",
              static_cast<unsigned long long>(stats.verdict_equal));
  std::printf("  expected only:        %llu\n",
              static_cast<unsigned long long>(stats.verdict_expected_only));
  std::printf("  alarms:               %llu\n",
              static_cast<unsigned long long>(stats.verdict_alarm));
  std::printf("expected differences:   %llu\n",
              static_cast<unsigned long long>(stats.expected_differences));
  std::printf("unexpected differences: %llu\n",
              static_cast<unsigned long long>(stats.unexpected_differences));
  std::printf("pairs timed out:        %llu\n",
              static_cast<unsigned long long>(stats.pairs_timed_out));
  std::printf("pairs voided:           %llu\n",
              static_cast<unsigned long long>(stats.pairs_voided));
  std::printf("shadow send failures:   %llu\n",
              static_cast<unsigned long long>(stats.shadow_send_failures));
  std::printf("warnings:               %llu\n", static_cast<unsigned long long>(stats.warnings));
}

struct ProxyArgs {
  std::string listen = "127.0.0.1:8080";
  std::string main_upstream;
  std::string shadow_upstream;
  std::string rules_path;
  std::string comparing_rate = "1s";
  std::string pair_timeout = "30s";
  std::size_t max_body = 16ull * 1024 * 1024;
  std::string diff_log;
  std::string alarm_log;
  std::string observations;
};

int run_proxy(const ProxyArgs& args, bool learning) {
  HostPort listen, main_upstream, shadow_upstream;
  double rate_s = 0, timeout_s = 0;
  if (!parse_host_port(args.listen, listen)) {
    std::cerr << "bad --listen value: " << args.listen << "\n";
    return kUsageExit;
  }
  if (!parse_host_port(args.main_upstream, main_upstream) ||
      !parse_host_port(args.shadow_upstream, shadow_upstream)) {
    std::cerr << "bad --main/--shadow value\n";
    return kUsageExit;
  }
  if (!parse_duration(args.comparing_rate, rate_s) ||
      !parse_duration(args.pair_timeout, timeout_s)) {
    std::cerr << "bad duration value\n";
    return kUsageExit;
  }

  char errbuf[512] = {0};
  sdf_ruleset* rules = nullptr;
  if (!args.rules_path.empty()) {
    sdf_status status = sdf_ruleset_load_file(args.rules_path.c_str(), &rules, errbuf,
                                              sizeof(errbuf));
    if (status != SDF_OK) {
      std::cerr << "cannot load rules: " << errbuf << "\n";
      return kUsageExit;
    }
    if (errbuf[0] != '\0') {
      std::cerr << "rules warning: " << errbuf << "\n";
    }
  }

  sdf_proxy_options options = {};
  options.listen_host = listen.host.c_str();
  options.listen_port = listen.port;
  options.main_host = main_upstream.host.c_str();
  options.main_port = main_upstream.port;
  options.shadow_host = shadow_upstream.host.c_str();
  options.shadow_port = shadow_upstream.port;
  options.learning_mode = learning ? 1 : 0;
  options.comparing_rate_s = rate_s;
  options.pair_timeout_s = timeout_s;
  options.max_body_bytes = args.max_body;
  options.diff_log_path = args.diff_log.empty() ? nullptr : args.diff_log.c_str();
  options.alarm_log_path = args.alarm_log.empty() ? nullptr : args.alarm_log.c_str();
  options.observations_path = args.observations.empty() ? nullptr : args.observations.c_str();
  options.print_special_output = learning ? 1 : 0;

  sdf_proxy* proxy = nullptr;
  errbuf[0] = '\0';
  sdf_status status = sdf_proxy_create(&options, rules, &proxy, errbuf, sizeof(errbuf));
  sdf_ruleset_free(rules);
  if (status != SDF_OK) {
    std::cerr << "cannot configure proxy: " << errbuf << "\n";
    return kUsageExit;
  }
  status = sdf_proxy_start(proxy, errbuf, sizeof(errbuf));
  if (status != SDF_OK) {
    std::cerr << "cannot start proxy: " << errbuf << "\n";
    sdf_proxy_free(proxy);
    return kUsageExit;
  }

  g_proxy = proxy;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::fprintf(stderr, "shadowdiff %s proxy on %s:%d (main %s:%d, shadow %s:%d)\n",
               learning ? "learning" : "comparing", listen.host.c_str(), sdf_proxy_port(proxy),
               main_upstream.host.c_str(), main_upstream.port, shadow_upstream.host.c_str(),
               shadow_upstream.port);

  sdf_proxy_wait(proxy);
  g_proxy = nullptr;

  sdf_proxy_stats stats = {};
  sdf_proxy_get_stats(proxy, &stats);
  print_stats(stats);
  sdf_proxy_free(proxy);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shadowdiff: run patched and unpatched web application instances side by side,\n"
               "compare their responses, and alarm on unexpected divergence."};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  ProxyArgs proxy_args;
  auto add_proxy_flags = [&proxy_args](CLI::App* cmd, bool learning) {
    cmd->add_option("--listen", proxy_args.listen, "listen address (host:port)");
    cmd->add_option("--main", proxy_args.main_upstream, "main (unpatched) upstream host:port")
        ->required();
    cmd->add_option("--shadow", proxy_args.shadow_upstream, "shadow (patched) upstream host:port")
        ->required();
    cmd->add_option("--rules", proxy_args.rules_path, "rule file of expected differences");
    cmd->add_option("--comparing-rate", proxy_args.comparing_rate,
                    "interval between comparison flushes (e.g. 1s, 500ms)");
    cmd->add_option("--pair-timeout", proxy_args.pair_timeout,
                    "how long to wait for both responses of a pair");
    cmd->add_option("--max-body", proxy_args.max_body, "maximum buffered body size in bytes");
    cmd->add_option("--observations", proxy_args.observations,
                    "observations file for reliability estimation");
    if (learning) {
      cmd->add_option("--diff-log", proxy_args.diff_log, "difference log (JSON lines)");
    } else {
      cmd->add_option("--alarm-log", proxy_args.alarm_log, "alarm log (JSON lines)");
    }
  };

  CLI::App* run_cmd =
      app.add_subcommand("run", "serve in comparing mode (alarm on unexpected differences)");
  add_proxy_flags(run_cmd, false);

  CLI::App* learn_cmd =
      app.add_subcommand("learn", "serve two identical instances and log differences");
  add_proxy_flags(learn_cmd, true);

  std::string suggest_log;
  unsigned min_support = 3;
  std::string base_rules;
  CLI::App* suggest_cmd =
      app.add_subcommand("suggest", "derive candidate rules from a difference log");
  suggest_cmd->add_option("--diff-log", suggest_log, "difference log from a learning run")
      ->required();
  suggest_cmd->add_option("--min-support", min_support,
                          "minimum number of distinct pairs showing a context");
  suggest_cmd->add_option("--base", base_rules, "existing rule file to carry over");

  std::string obs_path;
  std::string t_required = "0s";
  double threshold = 0.5;
  bool mark_restart = false;
  CLI::App* rel_cmd = app.add_subcommand(
      "reliability", "stop/continue decision from observed times to first difference");
  rel_cmd->add_option("--observations", obs_path, "observations file (JSON lines)")->required();
  rel_cmd->add_option("--t-required", t_required,
                      "required difference-free horizon (e.g. 3s, 2h, 30d)");
  rel_cmd->add_option("--threshold", threshold, "probability needed to stop");
  rel_cmd->add_flag("--mark-restart", mark_restart,
                    "append a restart marker instead of computing a report");

  std::string fixture_listen = "127.0.0.1:9000";
  std::uint64_t fixture_seed = 1;
  std::string fixture_mutation = "none";
  int fixture_delay_ms = 0;
  CLI::App* fixture_cmd =
      app.add_subcommand("fixture", "serve the demo twin application instance");
  fixture_cmd->add_option("--listen", fixture_listen, "listen address (host:port)");
  fixture_cmd->add_option("--seed", fixture_seed, "instance seed (vary per instance)");
  fixture_cmd->add_option(
      "--mutation", fixture_mutation,
      "emulated patch bug: none|status_flip|body_text_change|extra_field|missing_token");
  fixture_cmd->add_option("--delay-ms", fixture_delay_ms, "artificial response latency");

  std::string replay_target;
  std::string replay_script;
  int replay_workers = 1;
  std::uint64_t replay_seed = 1;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "replay a request script against a target");
  replay_cmd->add_option("--target", replay_target, "target host:port")->required();
  replay_cmd->add_option("--script", replay_script, "request script file")->required();
  replay_cmd->add_option("--workers", replay_workers, "concurrent sessions");
  replay_cmd->add_option("--seed", replay_seed, "client randomness seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : kUsageExit;
  }

  char errbuf[512] = {0};

  if (run_cmd->parsed()) return run_proxy(proxy_args, false);
  if (learn_cmd->parsed()) return run_proxy(proxy_args, true);

  if (suggest_cmd->parsed()) {
    char* text = nullptr;
    sdf_status status =
        sdf_suggest_rules(suggest_log.c_str(), min_support,
                          base_rules.empty() ? nullptr : base_rules.c_str(), &text, errbuf,
                          sizeof(errbuf));
    if (status != SDF_OK) {
      std::cerr << "suggest failed: " << errbuf << "\n";
      return kUsageExit;
    }
    std::fputs(text, stdout);
    sdf_string_free(text);
    return 0;
  }

  if (rel_cmd->parsed()) {
    if (mark_restart) {
      sdf_status status = sdf_observations_mark_restart(obs_path.c_str(), errbuf, sizeof(errbuf));
      if (status != SDF_OK) {
        std::cerr << "mark-restart failed: " << errbuf << "\n";
        return kUsageExit;
      }
      return 0;
    }
    double t_required_s = 0;
    if (!parse_duration(t_required, t_required_s)) {
      std::cerr << "bad --t-required value: " << t_required << "\n";
      return kUsageExit;
    }
    sdf_reliability_report report = {};
    sdf_status status = sdf_reliability_from_file(obs_path.c_str(), t_required_s, threshold,
                                                  &report, errbuf, sizeof(errbuf));
    if (status != SDF_OK) {
      std::cerr << "reliability failed: " << errbuf << "\n";
      return kUsageExit;
    }
    char* text = nullptr;
    if (sdf_reliability_render(&report, &text) == SDF_OK) {
      std::fputs(text, stdout);
      sdf_string_free(text);
    }
    return 0;
  }

  if (fixture_cmd->parsed()) {
    HostPort listen;
    if (!parse_host_port(fixture_listen, listen)) {
      std::cerr << "bad --listen value: " << fixture_listen << "\n";
      return kUsageExit;
    }
    sdf_fixture_options options = {};
    options.host = listen.host.c_str();
    options.port = listen.port;
    options.instance_seed = fixture_seed;
    options.mutation = fixture_mutation.c_str();
    options.delay_ms = fixture_delay_ms;
    sdf_fixture* fixture = nullptr;
    sdf_status status = sdf_fixture_create(&options, &fixture, errbuf, sizeof(errbuf));
    if (status != SDF_OK) {
      std::cerr << "cannot configure fixture: " << errbuf << "\n";
      return kUsageExit;
    }
    status = sdf_fixture_start(fixture, errbuf, sizeof(errbuf));
    if (status != SDF_OK) {
      std::cerr << "cannot start fixture: " << errbuf << "\n";
      sdf_fixture_free(fixture);
      return kUsageExit;
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::fprintf(stderr, "fixture instance (seed %llu, mutation %s) on %s:%d\n",
                 static_cast<unsigned long long>(fixture_seed), fixture_mutation.c_str(),
                 listen.host.c_str(), sdf_fixture_port(fixture));
    while (!g_signal) {
      struct timespec ts = {0, 100 * 1000 * 1000};
      nanosleep(&ts, nullptr);
    }
    sdf_fixture_stop(fixture);
    sdf_fixture_free(fixture);
    return 0;
  }

  if (replay_cmd->parsed()) {
    HostPort target;
    if (!parse_host_port(replay_target, target)) {
      std::cerr << "bad --target value: " << replay_target << "\n";
      return kUsageExit;
    }
    sdf_replay_summary summary = {};
    sdf_status status = sdf_replay_script(replay_script.c_str(), target.host.c_str(), target.port,
                                          replay_workers, replay_seed, &summary, errbuf,
                                          sizeof(errbuf));
    if (status != SDF_OK) {
      std::cerr << "replay failed: " << errbuf << "\n";
      return kUsageExit;
    }
    std::printf("requests: %llu, transport failures: %llu, 5xx: %llu\n",
                static_cast<unsigned long long>(summary.requests),
                static_cast<unsigned long long>(summary.transport_failures),
                static_cast<unsigned long long>(summary.status_5xx));
    return 0;
  }

  std::cerr << app.help() << "\n";
  return kUsageExit;
}
