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
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "http_message.hpp"
#include "rules.hpp"

namespace shadowdiff {

/// One scraped characteristic value: the main instance produced
/// `main_value` where the shadow instance produced `shadow_value`, for the
/// rule `name` within `session`.
struct ValueBinding {
  std::string name;
  std::string main_value;
  std::string shadow_value;
  std::string session;
  std::chrono::steady_clock::time_point observed_at{};
};

/// Per-session cookie state, fed only by the Set-Cookie headers of the
/// respective instance.
struct CookieJarPair {
  std::map<std::string, std::string> main_cookies;
  std::map<std::string, std::string> shadow_cookies;
};

/// The value that appears to be assigned near `name` in `body`: an
/// attribute value, JSON member value, or quoted/bare literal within 128
/// bytes after an occurrence of the name. nullopt when nothing plausible
/// follows any occurrence.
std::optional<std::string> scrape_value_near(std::string_view body, std::string_view name);

struct UpstreamTarget {
  std::string host;
  int port = 0;
  std::string host_header() const { return host + ":" + std::to_string(port); }
};

/// Session-scoped store of value bindings and cookie jars, plus the session
/// resolver that keeps one client's requests on one session id.
///
/// Session identity follows the main instance's session cookie once one has
/// been observed; before that, requests on the same client connection share
/// a session. All methods are thread-safe.
class ValueStore {
 public:
  /// Session id for a client request, creating one when unknown.
  std::string resolve_session(const HttpRequest& request);

  /// Records Set-Cookie values from one side's response. Main-side cookie
  /// values also register as session aliases for resolve_session.
  void note_cookies(const std::string& session, Side side, const HttpResponse& response);

  /// Scrapes every characteristic value named by the rules from a completed
  /// pair and returns the resulting bindings (already installed). Set-Cookie
  /// headers on both sides update the session's jars unconditionally. A name
  /// that yields a value on only one side produces no binding and a warning.
  std::vector<ValueBinding> scrape_values(const HttpResponse& main_resp,
                                          const HttpResponse& shadow_resp, const RuleSet& rules,
                                          const std::string& session,
                                          std::vector<std::string>* warnings = nullptr);

  void install_binding(ValueBinding binding);

  /// Pure lookup: the shadow-side value bound to (session, name,
  /// main_value), or nullopt.
  std::optional<std::string> map_identifier(const std::string& name,
                                            const std::string& main_value,
                                            const std::string& session) const;

  /// Deep copy of `request` customized for the shadow upstream: bound main
  /// values replaced by shadow values in query, headers, and body (form,
  /// JSON, and multipart bodies are decoded for substitution and
  /// re-encoded); Cookie rebuilt from the shadow jar; Host pointed at
  /// `shadow`; Content-Length recomputed.
  HttpRequest rewrite_request(const HttpRequest& request, const std::string& session,
                              const UpstreamTarget& shadow,
                              std::vector<std::string>* warnings = nullptr) const;

  CookieJarPair cookie_jar(const std::string& session) const;
  std::size_t binding_count() const;

 private:
  std::string connection_key(const HttpRequest& request) const;

  mutable std::mutex mutex_;
  std::uint64_t next_session_ = 1;
  std::unordered_map<std::string, std::string> session_by_cookie_value_;
  std::unordered_map<std::string, std::string> session_by_connection_;
  std::unordered_map<std::string, CookieJarPair> jars_;
  // (session, name, main_value) -> binding; newer observations replace older.
  std::map<std::tuple<std::string, std::string, std::string>, ValueBinding> bindings_;
};

/// Longest-match-first simultaneous substitution used for plain-text
/// rewriting; replacements never overlap or cascade.
std::string substitute_all(std::string_view text,
                           const std::vector<std::pair<std::string, std::string>>& subs);

}  // namespace shadowdiff
