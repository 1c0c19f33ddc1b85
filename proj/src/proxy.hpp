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

#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>

#include "rules.hpp"
#include "value_map.hpp"

namespace shadowdiff {

enum class ProxyMode { learning, comparing };

struct ProxyConfig {
  std::string listen_host = "127.0.0.1";
  int listen_port = 0;  // 0 binds an ephemeral port
  UpstreamTarget main_upstream;
  UpstreamTarget shadow_upstream;
  ProxyMode mode = ProxyMode::comparing;
  double comparing_rate_s = 1.0;
  double pair_timeout_s = 30.0;
  std::size_t max_body_bytes = 16ull * 1024 * 1024;
  std::string rules_path;      // informational; rules are passed in parsed
  std::string diff_log_path;   // learning mode JSONL output
  std::string alarm_log_path;  // comparing mode JSONL output
  std::string observations_path;
  int shadow_workers = 8;
  bool print_special_output = false;  // learning mode stdout rendering
};

struct ProxyStats {
  std::uint64_t pairs_opened = 0;
  std::uint64_t pairs_completed = 0;
  std::uint64_t pairs_compared = 0;
  std::uint64_t pairs_voided = 0;
  std::uint64_t pairs_timed_out = 0;
  std::uint64_t verdict_equal = 0;
  std::uint64_t verdict_expected_only = 0;
  std::uint64_t verdict_alarm = 0;
  std::uint64_t expected_differences = 0;
  std::uint64_t unexpected_differences = 0;
  std::uint64_t shadow_send_failures = 0;
  std::uint64_t protocol_errors = 0;
  std::uint64_t warnings = 0;
};

/// The differential reverse proxy: forwards client traffic to the main
/// upstream verbatim, replicates a rewritten copy to the shadow upstream,
/// returns the main response without waiting for the shadow, and feeds
/// completed pairs through the comparator at the comparing rate.
class Proxy {
 public:
  Proxy(ProxyConfig config, RuleSet rules);
  ~Proxy();

  Proxy(const Proxy&) = delete;
  Proxy& operator=(const Proxy&) = delete;

  /// Binds and serves on background threads. Throws on bind failure.
  void start();

  /// Stops accepting, drains in-flight pairs through one final flush, and
  /// joins all worker threads. Idempotent.
  void stop();

  /// Blocks until another thread calls stop() (or request_stop()).
  void wait();

  /// Signal-safe stop request; wait() returns and performs the shutdown.
  void request_stop() noexcept;

  int port() const;
  ProxyStats stats() const;
  ValueStore& values();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace shadowdiff
