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

#include "fixture_app.hpp"

#include <httplib.h>

#include <algorithm>
#include <mutex>
#include <random>
#include <thread>
#include <unordered_map>

#include "encoding.hpp"
#include "json_compare.hpp"

namespace shadowdiff {

namespace {

std::string random_hex(std::mt19937_64& rng, std::size_t digits) {
  static const char* hex = "0123456789abcdef";
  std::string out(digits, '0');
  for (auto& c : out) {
    c = hex[rng() & 0xF];
  }
  return out;
}

struct FixtureSession {
  std::string cookie;
  std::string csrf;
  std::uint64_t uid = 0;
};

}  // namespace

std::optional<FixtureMutation> fixture_mutation_from_string(std::string_view name) {
  if (name == "none") return FixtureMutation::none;
  if (name == "status_flip") return FixtureMutation::status_flip;
  if (name == "body_text_change") return FixtureMutation::body_text_change;
  if (name == "extra_field") return FixtureMutation::extra_field;
  if (name == "missing_token") return FixtureMutation::missing_token;
  return std::nullopt;
}

std::string_view to_string(FixtureMutation mutation) {
  switch (mutation) {
    case FixtureMutation::none: return "none";
    case FixtureMutation::status_flip: return "status_flip";
    case FixtureMutation::body_text_change: return "body_text_change";
    case FixtureMutation::extra_field: return "extra_field";
    case FixtureMutation::missing_token: return "missing_token";
  }
  return "none";
}

struct FixtureApp::Impl {
  FixtureConfig config;
  httplib::Server server;
  std::thread listen_thread;
  int bound_port = 0;

  std::mutex mutex;
  std::mt19937_64 rng;
  std::uint64_t response_counter = 0;
  std::unordered_map<std::string, FixtureSession> sessions;  // cookie -> session

  explicit Impl(FixtureConfig cfg) : config(std::move(cfg)), rng(config.instance_seed) {}

  // Returns the session for the request, creating one (and arranging a
  // Set-Cookie) when the client presents no known cookie.
  FixtureSession& ensure_session(const httplib::Request& req, httplib::Response& res) {
    std::string presented;
    auto it = req.headers.find("Cookie");
    if (it != req.headers.end()) {
      for (const auto& [name, value] : parse_cookie_header(it->second)) {
        if (name == "fxsession" && sessions.count(value)) {
          presented = value;
          break;
        }
      }
    }
    if (presented.empty()) {
      FixtureSession session;
      session.cookie = random_hex(rng, 32);
      session.uid = 100000 + rng() % 900000;
      presented = session.cookie;
      sessions.emplace(presented, std::move(session));
      res.set_header("Set-Cookie", "fxsession=" + presented + "; Path=/");
    }
    return sessions[presented];
  }

  std::string pseudo_timestamp() {
    // Monotonic per instance, distinct across instances; not wall clock so
    // runs reproduce byte-identically.
    std::uint64_t tick = 1700000000ull + config.instance_seed * 1000003ull + response_counter * 7ull;
    return "t" + std::to_string(tick);
  }

  void apply_delay() {
    if (config.delay_ms > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(config.delay_ms));
    }
  }

  void handle_root(const httplib::Request& req, httplib::Response& res) {
    if (config.mutation == FixtureMutation::missing_token) {
      // Simulates an instance that never answers: longer than any sensible
      // pair timeout, bounded so the worker thread is eventually reclaimed.
      std::this_thread::sleep_for(std::chrono::duration<double>(config.hang_seconds));
      res.status = 204;
      return;
    }
    apply_delay();
    std::string token;
    {
      std::lock_guard<std::mutex> lock(mutex);
      ++response_counter;
      FixtureSession& session = ensure_session(req, res);
      session.csrf = random_hex(rng, 40);
      token = session.csrf;
    }
    std::string body =
        "<!DOCTYPE html>\n"
        "<html>\n"
        "<head><title>Fixture Shop</title></head>\n"
        "<body>\n"
        "<h1>Fixture Shop</h1>\n";
    if (config.mutation == FixtureMutation::body_text_change) {
      body += "<p class=\"promo\">limited offer, today only</p>\n";
    }
    body +=
        "<form method=\"post\" action=\"/login\">\n"
        "<input type=\"hidden\" name=\"csrf\" value=\"" + token + "\">\n"
        "<input type=\"text\" name=\"user\" value=\"\">\n"
        "<input type=\"submit\" value=\"Sign in\">\n"
        "</form>\n"
        "<script type=\"text/javascript\">\n"
        "  var app = {\n"
        "    csrf_token: \"" + token + "\",\n"
        "        };\n"
        "</script>\n"
        "</body>\n"
        "</html>\n";
    res.set_content(body, "text/html; charset=utf-8");
  }

  void handle_login(const httplib::Request& req, httplib::Response& res) {
    apply_delay();
    std::string presented_csrf = req.get_param_value("csrf");
    bool ok;
    {
      std::lock_guard<std::mutex> lock(mutex);
      ++response_counter;
      FixtureSession& session = ensure_session(req, res);
      ok = !session.csrf.empty() && presented_csrf == session.csrf;
    }
    if (!ok) {
      res.status = 403;
      res.set_content("<html><body>csrf validation failed</body></html>\n",
                      "text/html; charset=utf-8");
      return;
    }
    res.status = 302;
    res.set_header("Location", "/welcome");
    res.set_content("<html><body>ok</body></html>\n", "text/html; charset=utf-8");
  }

  void handle_welcome(const httplib::Request& req, httplib::Response& res) {
    apply_delay();
    {
      std::lock_guard<std::mutex> lock(mutex);
      ++response_counter;
      ensure_session(req, res);
    }
    res.set_content(
        "<!DOCTYPE html>\n<html>\n<head><title>Welcome</title></head>\n"
        "<body><p>signed in</p><a href=\"/\">back</a></body>\n</html>\n",
        "text/html; charset=utf-8");
  }

  void handle_api_info(const httplib::Request& req, httplib::Response& res) {
    if (config.mutation == FixtureMutation::status_flip) {
      apply_delay();
      res.status = 500;
      res.set_content("{\"error\":\"internal\"}", "application/json");
      return;
    }
    apply_delay();
    OrderedJson doc;
    std::uint64_t shuffle_seed;
    {
      std::lock_guard<std::mutex> lock(mutex);
      ++response_counter;
      FixtureSession& session = ensure_session(req, res);
      doc["service"] = "fixture";
      doc["version"] = "1.4.2";
      doc["id"] = 1000 + config.instance_seed * 7;
      doc["generated_at"] = pseudo_timestamp();
      doc["session_info"] = {{"uid", session.uid}, {"db", "fxdb"}, {"role", "user"}};
      doc["items"] = OrderedJson::array(
          {{{"sku", "A-100"}, {"qty", 3}}, {{"sku", "B-200"}, {"qty", 1}}});
      if (config.mutation == FixtureMutation::extra_field) {
        doc["debug"] = true;
      }
      shuffle_seed = rng();
    }
    std::mt19937_64 shuffle_rng(shuffle_seed);
    res.set_content(shuffled(doc, shuffle_rng).dump(), "application/json");
  }

  // Same object, members re-ordered at every depth.
  static OrderedJson shuffled(const OrderedJson& value, std::mt19937_64& rng) {
    if (value.is_object()) {
      std::vector<std::string> keys;
      for (auto it = value.begin(); it != value.end(); ++it) keys.push_back(it.key());
      std::shuffle(keys.begin(), keys.end(), rng);
      OrderedJson out = OrderedJson::object();
      for (const auto& key : keys) out[key] = shuffled(value.at(key), rng);
      return out;
    }
    if (value.is_array()) {
      OrderedJson out = OrderedJson::array();
      for (const auto& item : value) out.push_back(shuffled(item, rng));
      return out;
    }
    return value;
  }

  void handle_upload(const httplib::Request& req, httplib::Response& res) {
    apply_delay();
    bool csrf_ok = false;
    {
      std::lock_guard<std::mutex> lock(mutex);
      ++response_counter;
      FixtureSession& session = ensure_session(req, res);
      if (req.has_file("csrf")) {
        csrf_ok = !session.csrf.empty() && req.get_file_value("csrf").content == session.csrf;
      }
    }
    OrderedJson parts = OrderedJson::array();
    for (const auto& file : req.files) {
      OrderedJson entry;
      entry["name"] = file.second.name;
      entry["size"] = file.second.content.size();
      if (!file.second.filename.empty()) {
        entry["filename"] = file.second.filename;
        entry["content_type"] = file.second.content_type;
        entry["digest"] = to_hex(fnv1a64(file.second.content));
      }
      parts.push_back(std::move(entry));
    }
    OrderedJson doc;
    doc["csrf_ok"] = csrf_ok;
    doc["parts"] = std::move(parts);
    res.set_content(doc.dump(), "application/json");
  }

  void handle_echo(const httplib::Request& req, httplib::Response& res) {
    apply_delay();
    {
      std::lock_guard<std::mutex> lock(mutex);
      ++response_counter;
    }
    OrderedJson headers = OrderedJson::object();
    for (const auto& [k, v] : req.headers) {
      if (k == "REMOTE_ADDR" || k == "REMOTE_PORT" || k == "LOCAL_ADDR" || k == "LOCAL_PORT") {
        continue;
      }
      headers[k] = v;
    }
    OrderedJson doc;
    doc["method"] = req.method;
    doc["target"] = req.target;
    doc["headers"] = std::move(headers);
    doc["body_size"] = req.body.size();
    doc["body"] = req.body.size() <= 4096 ? req.body : req.body.substr(0, 4096);
    res.set_content(doc.dump(), "application/json");
  }
};

FixtureApp::FixtureApp(FixtureConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

FixtureApp::~FixtureApp() { stop(); }

void FixtureApp::start() {
  Impl& im = *impl_;
  im.server.new_task_queue = [] { return new httplib::ThreadPool(16); };

  im.server.Get("/", [&im](const httplib::Request& req, httplib::Response& res) {
    im.handle_root(req, res);
  });
  im.server.Post("/login", [&im](const httplib::Request& req, httplib::Response& res) {
    im.handle_login(req, res);
  });
  im.server.Get("/welcome", [&im](const httplib::Request& req, httplib::Response& res) {
    im.handle_welcome(req, res);
  });
  im.server.Get("/api/info", [&im](const httplib::Request& req, httplib::Response& res) {
    im.handle_api_info(req, res);
  });
  im.server.Post("/upload", [&im](const httplib::Request& req, httplib::Response& res) {
    im.handle_upload(req, res);
  });
  im.server.Get("/echo", [&im](const httplib::Request& req, httplib::Response& res) {
    im.handle_echo(req, res);
  });
  im.server.Post("/echo", [&im](const httplib::Request& req, httplib::Response& res) {
    im.handle_echo(req, res);
  });

  if (im.config.port == 0) {
    im.bound_port = im.server.bind_to_any_port(im.config.host);
    if (im.bound_port <= 0) throw std::runtime_error("cannot bind " + im.config.host);
  } else {
    if (!im.server.bind_to_port(im.config.host, im.config.port)) {
      throw std::runtime_error("cannot bind " + im.config.host + ":" +
                               std::to_string(im.config.port));
    }
    im.bound_port = im.config.port;
  }
  im.listen_thread = std::thread([&im] { im.server.listen_after_bind(); });
  im.server.wait_until_ready();
}

void FixtureApp::stop() {
  Impl& im = *impl_;
  im.server.stop();
  if (im.listen_thread.joinable()) im.listen_thread.join();
}

int FixtureApp::port() const { return impl_->bound_port; }

}  // namespace shadowdiff
