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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace shadowdiff {

/// Behavior mutations for emulating a buggy patch on one instance.
enum class FixtureMutation {
  none,
  status_flip,       // /api/info answers 500
  body_text_change,  // / gains an extra paragraph
  extra_field,       // /api/info JSON gains a debug member
  missing_token,     // / never answers (exercises the pair-timeout path)
};

std::optional<FixtureMutation> fixture_mutation_from_string(std::string_view name);
std::string_view to_string(FixtureMutation mutation);

struct FixtureConfig {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 binds an ephemeral port
  std::uint64_t instance_seed = 1;
  FixtureMutation mutation = FixtureMutation::none;
  int delay_ms = 0;           // artificial latency on every response
  double hang_seconds = 120;  // how long missing_token suppresses a response
};

/// Small web application used for demos and integration tests. Two
/// instances with different seeds behave like twin deployments of one
/// application: identical logic, instance-specific random values.
///
/// Endpoints:
///   GET  /          HTML page with a per-response csrf token (form field
///                   and inline script), sets a session cookie
///   POST /login     form endpoint validating the csrf token
///   GET  /welcome   static page
///   GET  /api/info  JSON with instance id, pseudo-timestamp, per-session
///                   uid; member order shuffled per response
///   POST /upload    multipart endpoint echoing part metadata and digests
///   GET|POST /echo  request introspection (method, headers, body size)
///
/// All randomness is drawn from a generator seeded with `instance_seed`, so
/// a fixed request sequence reproduces byte-identical responses.
class FixtureApp {
 public:
  explicit FixtureApp(FixtureConfig config);
  ~FixtureApp();

  FixtureApp(const FixtureApp&) = delete;
  FixtureApp& operator=(const FixtureApp&) = delete;

  void start();  // throws on bind failure
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace shadowdiff
