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

#include "pairing.hpp"

#include <algorithm>

namespace shadowdiff {

PairKey PairStore::open_pair(std::string request_summary, std::string session, MonotonicTime now,
                             Duration pair_timeout) {
  std::lock_guard<std::mutex> lock(mutex_);
  PairKey key = next_key_++;
  Pending pending;
  pending.pair.key = key;
  pending.pair.request_summary = std::move(request_summary);
  pending.pair.session = std::move(session);
  pending.pair.created_at = now;
  pending.pair.deadline = now + pair_timeout;
  gate_[pending.pair.session].insert(key);
  pairs_.emplace(key, std::move(pending));
  return key;
}

SubmitResult PairStore::submit_response(PairKey key, Side side, HttpResponse response) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = pairs_.find(key);
  if (it == pairs_.end()) {
    return {SubmitStatus::unknown_key, std::nullopt};
  }
  auto& slot = side == Side::main ? it->second.pair.main_response
                                  : it->second.pair.shadow_response;
  if (slot.has_value()) {
    return {SubmitStatus::duplicate_side, std::nullopt};  // first submission wins
  }
  slot = std::move(response);
  if (it->second.pair.complete()) {
    return {SubmitStatus::completed, it->second.pair};
  }
  return {SubmitStatus::incomplete, std::nullopt};
}

std::vector<ResponsePair> PairStore::flush(MonotonicTime now) {
  std::vector<ResponsePair> out;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (auto it = pairs_.begin(); it != pairs_.end();) {
      ResponsePair& pair = it->second.pair;
      if (pair.complete() || pair.deadline <= now) {
        release_gate_locked(pair.session, pair.key);
        out.push_back(std::move(pair));
        it = pairs_.erase(it);
      } else {
        ++it;
      }
    }
  }
  gate_cv_.notify_all();
  return out;
}

std::pair<std::vector<ResponsePair>, std::size_t> PairStore::flush_final() {
  std::vector<ResponsePair> out;
  std::size_t dropped = 0;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (auto it = pairs_.begin(); it != pairs_.end();) {
      ResponsePair& pair = it->second.pair;
      release_gate_locked(pair.session, pair.key);
      if (pair.complete()) {
        out.push_back(std::move(pair));
      } else {
        ++dropped;
      }
      it = pairs_.erase(it);
    }
  }
  gate_cv_.notify_all();
  return {std::move(out), dropped};
}

void PairStore::close_void(PairKey key) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = pairs_.find(key);
    if (it == pairs_.end()) return;
    release_gate_locked(it->second.pair.session, key);
    pairs_.erase(it);
  }
  gate_cv_.notify_all();
}

void PairStore::mark_processed(PairKey key) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = pairs_.find(key);
    if (it != pairs_.end()) {
      if (it->second.gate_released) return;
      it->second.gate_released = true;
      release_gate_locked(it->second.pair.session, key);
    } else {
      // Pair already flushed; the gate entry (if any) went with it.
      for (auto& [session, keys] : gate_) keys.erase(key);
    }
  }
  gate_cv_.notify_all();
}

bool PairStore::wait_for_session_turn(const std::string& session, PairKey key,
                                      MonotonicTime deadline) {
  std::unique_lock<std::mutex> lock(mutex_);
  auto turn = [&]() {
    auto it = gate_.find(session);
    if (it == gate_.end() || it->second.empty()) return true;
    return *it->second.begin() >= key;
  };
  return gate_cv_.wait_until(lock, deadline, turn);
}

std::size_t PairStore::pending() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return pairs_.size();
}

void PairStore::release_gate_locked(const std::string& session, PairKey key) {
  auto it = gate_.find(session);
  if (it == gate_.end()) return;
  it->second.erase(key);
  if (it->second.empty()) gate_.erase(it);
}

}  // namespace shadowdiff
