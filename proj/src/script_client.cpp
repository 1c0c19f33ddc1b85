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

#include "script_client.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "encoding.hpp"
#include "rules.hpp"

namespace shadowdiff {

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) {
      out.emplace_back(text.substr(pos));
      return out;
    }
    out.emplace_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
}

ScriptStep::Part parse_part(std::string_view spec, std::size_t line_no) {
  auto fields = split(spec, ':');
  ScriptStep::Part part;
  if (fields.size() >= 3 && fields[0] == "text") {
    part.is_file = false;
    part.name = fields[1];
    // the value may itself contain ':'
    part.value = std::string(spec.substr(5 + part.name.size() + 1));
    return part;
  }
  if (fields.size() == 4 && fields[0] == "file") {
    part.is_file = true;
    part.name = fields[1];
    part.filename = fields[2];
    part.size = static_cast<std::size_t>(std::stoul(fields[3]));
    return part;
  }
  throw std::runtime_error("script line " + std::to_string(line_no) +
                           ": bad multipart part spec '" + std::string(spec) + "'");
}

// The hidden csrf field of the fixture's HTML form.
std::string scrape_csrf(const std::string& html) {
  const std::string marker = "name=\"csrf\" value=\"";
  std::size_t pos = html.find(marker);
  if (pos == std::string::npos) return "";
  std::size_t start = pos + marker.size();
  std::size_t end = html.find('"', start);
  if (end == std::string::npos) return "";
  return html.substr(start, end - start);
}

class SessionState {
 public:
  explicit SessionState(std::uint64_t seed) : rng_(seed) {}

  std::string expand(std::string_view tmpl) const {
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
      std::size_t brace = tmpl.find("{csrf}", pos);
      if (brace == std::string_view::npos) {
        out += tmpl.substr(pos);
        break;
      }
      out += tmpl.substr(pos, brace - pos);
      out += csrf_;
      pos = brace + 6;
    }
    return out;
  }

  void absorb(const HttpResponse& response) {
    for (const auto& value : response.header_values("Set-Cookie")) {
      if (auto cookie = parse_set_cookie(value)) {
        cookies_[cookie->first] = cookie->second;
      }
    }
    if (response.media_type().rfind("text/html", 0) == 0 ||
        response.media_type() == "text/html") {
      std::string token = scrape_csrf(response.body);
      if (!token.empty()) csrf_ = token;
    }
  }

  std::string cookie_header() const {
    std::string out;
    for (const auto& [name, value] : cookies_) {
      if (!out.empty()) out += "; ";
      out += name + "=" + value;
    }
    return out;
  }

  std::string file_bytes(std::size_t size) {
    std::string out(size, '\0');
    for (auto& c : out) c = static_cast<char>(rng_() & 0xFF);
    return out;
  }

 private:
  std::mt19937_64 rng_;
  std::map<std::string, std::string> cookies_;
  std::string csrf_;
};

HttpResponse from_httplib(const httplib::Response& res) {
  HttpResponse out;
  out.status = res.status;
  for (const auto& [k, v] : res.headers) out.headers.emplace_back(k, v);
  out.body = res.body;
  return out;
}

}  // namespace

std::vector<ScriptStep> parse_script(std::string_view text) {
  std::vector<ScriptStep> steps;
  std::size_t line_no = 0;
  for (const auto& raw_line : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;

    std::size_t sp1 = line.find(' ');
    if (sp1 == std::string_view::npos) {
      throw std::runtime_error("script line " + std::to_string(line_no) + ": missing path");
    }
    std::string_view verb = line.substr(0, sp1);
    std::string_view rest = trim(line.substr(sp1 + 1));

    ScriptStep step;
    if (verb == "GET") {
      step.kind = ScriptStep::Kind::get;
      step.path = std::string(rest);
    } else if (verb == "POST") {
      std::size_t sp2 = rest.find(' ');
      if (sp2 == std::string_view::npos) {
        throw std::runtime_error("script line " + std::to_string(line_no) +
                                 ": POST needs 'form <body>'");
      }
      step.path = std::string(rest.substr(0, sp2));
      std::string_view tail = trim(rest.substr(sp2 + 1));
      if (tail.rfind("form ", 0) != 0) {
        throw std::runtime_error("script line " + std::to_string(line_no) +
                                 ": only 'form' POST bodies are supported");
      }
      step.kind = ScriptStep::Kind::post_form;
      step.body_template = std::string(trim(tail.substr(5)));
    } else if (verb == "MULTIPART") {
      std::size_t sp2 = rest.find(' ');
      if (sp2 == std::string_view::npos) {
        throw std::runtime_error("script line " + std::to_string(line_no) +
                                 ": MULTIPART needs parts");
      }
      step.kind = ScriptStep::Kind::multipart;
      step.path = std::string(rest.substr(0, sp2));
      for (const auto& part : split(trim(rest.substr(sp2 + 1)), ';')) {
        step.parts.push_back(parse_part(trim(part), line_no));
      }
    } else {
      throw std::runtime_error("script line " + std::to_string(line_no) + ": unknown verb '" +
                               std::string(verb) + "'");
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

std::vector<ScriptStep> load_script(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open script: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_script(buf.str());
}

std::vector<ReplayRecord> replay_script(const std::vector<ScriptStep>& steps,
                                        const ReplayOptions& options) {
  httplib::Client client(options.host, options.port);
  client.set_keep_alive(true);
  const int timeout = static_cast<int>(options.timeout_s);
  client.set_connection_timeout(timeout, 0);
  client.set_read_timeout(timeout, 0);

  SessionState state(options.seed);
  std::vector<ReplayRecord> records;

  for (const auto& step : steps) {
    ReplayRecord record;
    record.path = step.path;
    httplib::Headers headers;
    std::string cookie = state.cookie_header();
    if (!cookie.empty()) headers.emplace("Cookie", cookie);

    auto started = std::chrono::steady_clock::now();
    httplib::Result result;
    switch (step.kind) {
      case ScriptStep::Kind::get: {
        record.method = "GET";
        result = client.Get(step.path, headers);
        break;
      }
      case ScriptStep::Kind::post_form: {
        record.method = "POST";
        result = client.Post(step.path, headers, state.expand(step.body_template),
                             "application/x-www-form-urlencoded");
        break;
      }
      case ScriptStep::Kind::multipart: {
        record.method = "POST";
        MultipartBody mp;
        for (const auto& part : step.parts) {
          MultipartPart encoded;
          if (part.is_file) {
            encoded.headers.emplace_back(
                "Content-Disposition",
                "form-data; name=\"" + part.name + "\"; filename=\"" + part.filename + "\"");
            encoded.headers.emplace_back("Content-Type", "application/octet-stream");
            encoded.body = state.file_bytes(part.size);
          } else {
            encoded.headers.emplace_back("Content-Disposition",
                                         "form-data; name=\"" + part.name + "\"");
            encoded.body = state.expand(part.value);
          }
          mp.parts.push_back(std::move(encoded));
        }
        std::string boundary = fresh_boundary(mp);
        result = client.Post(step.path, headers, multipart_encode(mp, boundary),
                             "multipart/form-data; boundary=" + boundary);
        break;
      }
    }
    record.latency_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (result) {
      record.transport_ok = true;
      record.response = from_httplib(*result);
      state.absorb(record.response);
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<std::vector<ReplayRecord>> replay_script_parallel(
    const std::vector<ScriptStep>& steps, const ReplayOptions& options, int workers) {
  workers = std::max(workers, 1);
  std::vector<std::vector<ReplayRecord>> results(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int i = 0; i < workers; ++i) {
    threads.emplace_back([&, i] {
      ReplayOptions worker_options = options;
      worker_options.seed = options.seed + static_cast<std::uint64_t>(i) * 7919u;
      results[static_cast<std::size_t>(i)] = replay_script(steps, worker_options);
    });
  }
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace shadowdiff
