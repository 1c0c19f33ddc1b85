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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "http_message.hpp"

namespace shadowdiff {

/// Process-unique identifier binding a client request's two upstream
/// copies. Travels only in the internal pairing header; never forwarded to
/// the client.
using PairKey = std::uint64_t;

inline std::string pair_key_string(PairKey key) { return "k" + std::to_string(key); }

/// Internal header carrying the pairing key on upstream requests.
inline constexpr const char* kPairingHeader = "X-Shadowdiff-Key";

using MonotonicTime = std::chrono::steady_clock::time_point;
using Duration = std::chrono::steady_clock::duration;

/// The two responses to one logical client request. Complete when both
/// sides are present; a pair flushed past its deadline is released with the
/// missing side absent.
struct ResponsePair {
  PairKey key = 0;
  std::string request_summary;
  std::string session;
  std::optional<HttpResponse> main_response;
  std::optional<HttpResponse> shadow_response;
  MonotonicTime created_at{};
  MonotonicTime deadline{};

  bool complete() const { return main_response.has_value() && shadow_response.has_value(); }
};

enum class SubmitStatus { incomplete, completed, unknown_key, duplicate_side };

struct SubmitResult {
  SubmitStatus status = SubmitStatus::incomplete;
  /// Snapshot of the full pair, set exactly once when this submission
  /// completed it.
  std::optional<ResponsePair> completed_pair;
};

/// Buffers in-flight response pairs between the request path and the
/// periodic comparison flush. All operations are thread-safe; operations on
/// distinct keys do not contend beyond the store lock.
///
/// The store also sequences per-session shadow dispatch: a shadow-bound
/// request should not be rewritten until earlier pairs of the same session
/// have been scraped, or their deadline has passed. Keys enter that gate at
/// open_pair and leave it via mark_processed, close_void, or a deadline
/// flush.
class PairStore {
 public:
  PairKey open_pair(std::string request_summary, std::string session, MonotonicTime now,
                    Duration pair_timeout);

  SubmitResult submit_response(PairKey key, Side side, HttpResponse response);

  /// Complete pairs plus incomplete ones whose deadline has passed, removed
  /// from the store in key order. Pending pairs within their deadline stay.
  std::vector<ResponsePair> flush(MonotonicTime now);

  /// Shutdown drain: releases complete pairs for one final comparison and
  /// drops the rest. Returns (flushed, dropped_count).
  std::pair<std::vector<ResponsePair>, std::size_t> flush_final();

  /// Abandons a pair (e.g. the main upstream failed and the client got a
  /// 502); nothing will be compared for it.
  void close_void(PairKey key);

  /// Releases `key` from the session gate once its completed pair has been
  /// scraped.
  void mark_processed(PairKey key);

  /// Blocks until every earlier key of `session` has left the gate, or
  /// `deadline` passes. Returns true when the gate actually cleared.
  bool wait_for_session_turn(const std::string& session, PairKey key, MonotonicTime deadline);

  std::size_t pending() const;

 private:
  struct Pending {
    ResponsePair pair;
    bool gate_released = false;
  };

  void release_gate_locked(const std::string& session, PairKey key);

  mutable std::mutex mutex_;
  std::condition_variable gate_cv_;
  PairKey next_key_ = 1;
  std::map<PairKey, Pending> pairs_;
  std::unordered_map<std::string, std::set<PairKey>> gate_;
};

}  // namespace shadowdiff
