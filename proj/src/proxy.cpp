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

#include "proxy.hpp"

#include <httplib.h>

#include <condition_variable>
#include <deque>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "comparator.hpp"
#include "encoding.hpp"
#include "learning.hpp"
#include "pairing.hpp"
#include "reliability.hpp"

namespace shadowdiff {

namespace {

// Hop-by-hop and proxy-managed request headers, never forwarded upstream.
bool is_hop_request_header(std::string_view name) {
  static const char* kHop[] = {"Host",     "Connection", "Keep-Alive", "Proxy-Connection",
                               "TE",       "Trailer",    "Transfer-Encoding", "Upgrade",
                               "Expect",   "Accept-Encoding", "Content-Length",
                               kPairingHeader};
  for (const char* h : kHop) {
    if (iequals(name, h)) return true;
  }
  return false;
}

// Response headers regenerated by the proxy's own server layer.
bool is_managed_response_header(std::string_view name) {
  static const char* kManaged[] = {"Connection", "Keep-Alive", "Transfer-Encoding",
                                   "Content-Length", kPairingHeader};
  for (const char* h : kManaged) {
    if (iequals(name, h)) return true;
  }
  return false;
}

double wall_now() {
  return std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct ShadowTask {
  PairKey key = 0;
  std::string session;
  HttpRequest request;
  MonotonicTime deadline{};
};

class LineLog {
 public:
  void open(const std::string& path) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!path.empty()) {
      out_.open(path, std::ios::app);
      enabled_ = out_.is_open();
    }
  }
  void write(const std::string& line) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!enabled_) return;
    out_ << line << "\n";
    out_.flush();
  }
  bool enabled() const { return enabled_; }

 private:
  std::mutex mutex_;
  std::ofstream out_;
  bool enabled_ = false;
};

}  // namespace

struct Proxy::Impl {
  ProxyConfig config;
  RuleSet rules;

  httplib::Server server;
  std::thread listen_thread;
  int bound_port = 0;

  PairStore pairs;
  ValueStore values;

  // Shadow dispatch queue.
  std::mutex queue_mutex;
  std::condition_variable queue_cv;
  std::deque<ShadowTask> queue;
  bool queue_closed = false;
  std::vector<std::thread> shadow_threads;

  // Flush scheduler.
  std::thread flush_thread;
  std::mutex stop_mutex;
  std::condition_variable stop_cv;
  bool stopping = false;
  std::atomic<bool> stop_requested{false};
  std::atomic<bool> started{false};
  std::atomic<bool> stopped{false};

  LineLog diff_log;
  LineLog alarm_log;
  bool observation_recorded = false;
  double wall_start = 0.0;

  mutable std::mutex stats_mutex;
  ProxyStats stats;

  Duration pair_timeout() const {
    return std::chrono::duration_cast<Duration>(
        std::chrono::duration<double>(config.pair_timeout_s));
  }

  void bump(std::uint64_t ProxyStats::* field, std::uint64_t amount = 1) {
    std::lock_guard<std::mutex> lock(stats_mutex);
    stats.*field += amount;
  }

  HttpRequest to_request(const httplib::Request& req) {
    HttpRequest out;
    out.method = req.method;
    out.target = req.target.empty() ? req.path : req.target;
    for (const auto& [k, v] : req.headers) {
      // httplib bookkeeping entries are not real headers
      if (k == "REMOTE_ADDR" || k == "REMOTE_PORT" || k == "LOCAL_ADDR" || k == "LOCAL_PORT") {
        continue;
      }
      out.headers.emplace_back(k, v);
    }
    out.body = req.body;
    out.client_addr = req.remote_addr;
    out.client_port = req.remote_port;
    return out;
  }

  HttpRequest prepare_upstream(const HttpRequest& req, PairKey key) {
    HttpRequest up = req;
    std::erase_if(up.headers, [](const auto& h) { return is_hop_request_header(h.first); });
    up.headers.emplace_back(kPairingHeader, std::to_string(key));
    up.headers.emplace_back("Via", "1.1 shadowdiff");
    return up;
  }

  std::optional<HttpResponse> send_upstream(const UpstreamTarget& target,
                                            const HttpRequest& req) {
    httplib::Client client(target.host, target.port);
    client.set_connection_timeout(5, 0);
    const int read_s = static_cast<int>(config.pair_timeout_s) + 5;
    client.set_read_timeout(read_s, 0);
    client.set_write_timeout(read_s, 0);

    httplib::Request hreq;
    hreq.method = req.method;
    hreq.path = req.target;
    for (const auto& [k, v] : req.headers) {
      hreq.headers.emplace(k, v);
    }
    hreq.body = req.body;

    httplib::Result result = client.send(hreq);
    if (!result) return std::nullopt;

    HttpResponse out;
    out.status = result->status;
    for (const auto& [k, v] : result->headers) {
      out.headers.emplace_back(k, v);
    }
    out.body = result->body;
    return out;
  }

  void handle_completion(const ResponsePair& pair) {
    bump(&ProxyStats::pairs_completed);
    std::vector<std::string> warnings;
    values.scrape_values(*pair.main_response, *pair.shadow_response, rules, pair.session,
                         &warnings);
    if (!warnings.empty()) bump(&ProxyStats::warnings, warnings.size());
    pairs.mark_processed(pair.key);
  }

  void shadow_worker() {
    for (;;) {
      ShadowTask task;
      {
        std::unique_lock<std::mutex> lock(queue_mutex);
        queue_cv.wait(lock, [this] { return queue_closed || !queue.empty(); });
        if (queue.empty()) {
          if (queue_closed) return;
          continue;
        }
        task = std::move(queue.front());
        queue.pop_front();
      }

      // Earlier pairs of this session must be scraped first so the rewrite
      // sees fresh bindings; a stuck predecessor is bounded by its deadline.
      pairs.wait_for_session_turn(task.session, task.key, task.deadline);

      std::vector<std::string> warnings;
      HttpRequest rewritten =
          values.rewrite_request(task.request, task.session, config.shadow_upstream, &warnings);
      if (!warnings.empty()) bump(&ProxyStats::warnings, warnings.size());
      HttpRequest up = prepare_upstream(rewritten, task.key);
      up.set_header("Host", config.shadow_upstream.host_header());

      auto response = send_upstream(config.shadow_upstream, up);
      if (!response) {
        bump(&ProxyStats::shadow_send_failures);
        continue;  // the pair will surface through the deadline path
      }
      SubmitResult result = pairs.submit_response(task.key, Side::shadow, std::move(*response));
      switch (result.status) {
        case SubmitStatus::completed:
          handle_completion(*result.completed_pair);
          break;
        case SubmitStatus::unknown_key:
        case SubmitStatus::duplicate_side:
          bump(&ProxyStats::protocol_errors);
          break;
        case SubmitStatus::incomplete:
          break;
      }
    }
  }

  void handle_request(const httplib::Request& hreq, httplib::Response& hres) {
    HttpRequest req = to_request(hreq);
    const std::string session = values.resolve_session(req);
    const MonotonicTime now = std::chrono::steady_clock::now();
    const PairKey key = pairs.open_pair(req.summary(), session, now, pair_timeout());
    bump(&ProxyStats::pairs_opened);

    {
      std::lock_guard<std::mutex> lock(queue_mutex);
      if (!queue_closed) {
        queue.push_back({key, session, req, now + pair_timeout()});
      }
    }
    queue_cv.notify_one();

    auto main_response = send_upstream(config.main_upstream, prepare_upstream(req, key));
    if (!main_response) {
      pairs.close_void(key);
      bump(&ProxyStats::pairs_voided);
      hres.status = 502;
      hres.set_content("main upstream unreachable\n", "text/plain");
      return;
    }

    // Register session cookies before the client can use them.
    values.note_cookies(session, Side::main, *main_response);

    SubmitResult result = pairs.submit_response(key, Side::main, *main_response);
    switch (result.status) {
      case SubmitStatus::completed:
        handle_completion(*result.completed_pair);
        break;
      case SubmitStatus::unknown_key:
      case SubmitStatus::duplicate_side:
        bump(&ProxyStats::protocol_errors);
        break;
      case SubmitStatus::incomplete:
        break;
    }

    hres.status = main_response->status;
    for (const auto& [k, v] : main_response->headers) {
      if (is_managed_response_header(k)) continue;
      hres.headers.emplace(k, v);
    }
    hres.body = std::move(main_response->body);
  }

  void process_batch(std::vector<ResponsePair> batch) {
    for (ResponsePair& pair : batch) {
      if (!pair.complete()) bump(&ProxyStats::pairs_timed_out);
      ComparisonOutcome outcome = compare_pair(pair, rules);
      const double now = wall_now();
      {
        std::lock_guard<std::mutex> lock(stats_mutex);
        stats.pairs_compared += 1;
        stats.expected_differences += outcome.expected.size();
        stats.unexpected_differences += outcome.unexpected.size();
        stats.warnings += outcome.warnings.size();
        switch (outcome.verdict) {
          case Verdict::equal: stats.verdict_equal += 1; break;
          case Verdict::expected_only: stats.verdict_expected_only += 1; break;
          case Verdict::alarm: stats.verdict_alarm += 1; break;
        }
      }

      if (config.mode == ProxyMode::learning) {
        if (!outcome.unexpected.empty()) {
          diff_log.write(outcome_to_json_line(outcome, now));
          if (config.print_special_output) {
            for (const auto& token : outcome.unexpected) {
              DifferenceRecord record;
              record.time = now;
              record.pair_key = outcome.pair_key;
              record.request_summary = outcome.request_summary;
              record.verdict = std::string(to_string(outcome.verdict));
              record.token = token;
              std::cout << format_special(record) << "\n";
            }
          }
        }
      } else if (outcome.verdict == Verdict::alarm) {
        alarm_log.write(outcome_to_json_line(outcome, now));
        if (!config.observations_path.empty() && !observation_recorded) {
          observation_recorded = true;
          append_observation(config.observations_path, next_run_index(config.observations_path),
                             now - wall_start);
        }
      }
    }
  }

  void flusher() {
    const auto interval = std::chrono::duration_cast<Duration>(
        std::chrono::duration<double>(config.comparing_rate_s));
    for (;;) {
      {
        std::unique_lock<std::mutex> lock(stop_mutex);
        if (stop_cv.wait_for(lock, interval, [this] { return stopping; })) return;
      }
      process_batch(pairs.flush(std::chrono::steady_clock::now()));
    }
  }
};

Proxy::Proxy(ProxyConfig config, RuleSet rules) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  impl_->rules = std::move(rules);
}

Proxy::~Proxy() { stop(); }

void Proxy::start() {
  Impl& im = *impl_;
  if (im.started.exchange(true)) return;
  im.wall_start = wall_now();
  im.diff_log.open(im.config.diff_log_path);
  im.alarm_log.open(im.config.alarm_log_path);

  im.server.new_task_queue = [] { return new httplib::ThreadPool(16); };
  im.server.set_payload_max_length(im.config.max_body_bytes);

  auto handler = [this](const httplib::Request& req, httplib::Response& res) {
    impl_->handle_request(req, res);
  };
  const char* pattern = ".*";
  im.server.Get(pattern, handler);
  im.server.Post(pattern, handler);
  im.server.Put(pattern, handler);
  im.server.Patch(pattern, handler);
  im.server.Delete(pattern, handler);
  im.server.Options(pattern, handler);

  if (im.config.listen_port == 0) {
    im.bound_port = im.server.bind_to_any_port(im.config.listen_host);
    if (im.bound_port <= 0) {
      throw std::runtime_error("cannot bind " + im.config.listen_host);
    }
  } else {
    if (!im.server.bind_to_port(im.config.listen_host, im.config.listen_port)) {
      throw std::runtime_error("cannot bind " + im.config.listen_host + ":" +
                               std::to_string(im.config.listen_port));
    }
    im.bound_port = im.config.listen_port;
  }

  const int workers = std::max(im.config.shadow_workers, 1);
  for (int i = 0; i < workers; ++i) {
    im.shadow_threads.emplace_back([this] { impl_->shadow_worker(); });
  }
  im.flush_thread = std::thread([this] { impl_->flusher(); });
  im.listen_thread = std::thread([this] { impl_->server.listen_after_bind(); });
  im.server.wait_until_ready();
}

void Proxy::stop() {
  Impl& im = *impl_;
  if (!im.started.load() || im.stopped.exchange(true)) return;

  im.server.stop();
  if (im.listen_thread.joinable()) im.listen_thread.join();

  {
    std::lock_guard<std::mutex> lock(im.queue_mutex);
    im.queue_closed = true;
    im.queue.clear();  // unstarted shadow sends are abandoned at shutdown
  }
  im.queue_cv.notify_all();
  for (auto& t : im.shadow_threads) {
    if (t.joinable()) t.join();
  }
  im.shadow_threads.clear();

  {
    std::lock_guard<std::mutex> lock(im.stop_mutex);
    im.stopping = true;
  }
  im.stop_cv.notify_all();
  if (im.flush_thread.joinable()) im.flush_thread.join();

  // Final drain: compare what completed, void the rest.
  auto [batch, dropped] = im.pairs.flush_final();
  im.process_batch(std::move(batch));
  if (dropped > 0) im.bump(&ProxyStats::pairs_voided, dropped);
}

void Proxy::wait() {
  while (!impl_->stop_requested.load()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  stop();
}

void Proxy::request_stop() noexcept { impl_->stop_requested.store(true); }

int Proxy::port() const { return impl_->bound_port; }

ProxyStats Proxy::stats() const {
  std::lock_guard<std::mutex> lock(impl_->stats_mutex);
  return impl_->stats;
}

ValueStore& Proxy::values() { return impl_->values; }

}  // namespace shadowdiff
