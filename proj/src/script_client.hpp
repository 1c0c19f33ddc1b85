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
#include <string>
#include <vector>

#include "http_message.hpp"

namespace shadowdiff {

/// One line of a request script. Grammar, one step per line:
///   GET <path>
///   POST <path> form <body, may contain {csrf}>
///   MULTIPART <path> <part>;<part>...
/// where a part is `text:<name>:<value>` or `file:<name>:<filename>:<bytes>`
/// (file bytes are generated from the worker seed). `{csrf}` expands to the
/// token most recently scraped from an HTML response, like a browser
/// resubmitting a hidden form field.
struct ScriptStep {
  enum class Kind { get, post_form, multipart };
  struct Part {
    bool is_file = false;
    std::string name;
    std::string value;     // text parts: value template
    std::string filename;  // file parts
    std::size_t size = 0;  // file parts
  };

  Kind kind = Kind::get;
  std::string path;
  std::string body_template;  // post_form
  std::vector<Part> parts;    // multipart
};

std::vector<ScriptStep> parse_script(std::string_view text);
std::vector<ScriptStep> load_script(const std::string& path);

struct ReplayOptions {
  std::string host = "127.0.0.1";
  int port = 0;
  std::uint64_t seed = 1;
  double timeout_s = 30.0;
};

struct ReplayRecord {
  std::string method;
  std::string path;
  bool transport_ok = false;
  HttpResponse response;
  double latency_s = 0.0;
};

/// Replays a script over one keep-alive connection, tracking cookies and
/// the embedded csrf token like a minimal browser.
std::vector<ReplayRecord> replay_script(const std::vector<ScriptStep>& steps,
                                        const ReplayOptions& options);

/// Replays the same script on `workers` concurrent independent sessions.
/// Records are returned grouped per worker.
std::vector<std::vector<ReplayRecord>> replay_script_parallel(
    const std::vector<ScriptStep>& steps, const ReplayOptions& options, int workers);

}  // namespace shadowdiff
