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

#include "value_map.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "encoding.hpp"
#include "json_compare.hpp"
#include "pairing.hpp"

namespace shadowdiff {

namespace {

// Scraping looks this far past an occurrence of the rule name for the
// assigned value; bounds the cost on large bodies.
constexpr std::size_t kScrapeWindow = 128;

bool is_value_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '%' ||
         c == '/' || c == '+' || c == '-';
}

// The first quoted run in `window`, or a bare value-looking run starting at
// the front.
std::optional<std::string> value_in_window(std::string_view window) {
  // Prefer an explicit value= attribute anywhere in the window.
  std::size_t vpos = window.find("value=");
  if (vpos != std::string_view::npos) {
    std::string_view after = window.substr(vpos + 6);
    if (!after.empty() && (after.front() == '"' || after.front() == '\'')) {
      char quote = after.front();
      std::size_t close = after.find(quote, 1);
      if (close != std::string_view::npos && close > 1) {
        return std::string(after.substr(1, close - 1));
      }
    }
  }

  // Leading separator run: closing quote of the name itself, whitespace,
  // and one ':' or '='.
  std::size_t pos = 0;
  if (pos < window.size() && (window[pos] == '"' || window[pos] == '\'')) ++pos;
  while (pos < window.size() && std::isspace(static_cast<unsigned char>(window[pos]))) ++pos;
  if (pos < window.size() && (window[pos] == ':' || window[pos] == '=')) ++pos;
  while (pos < window.size() && std::isspace(static_cast<unsigned char>(window[pos]))) ++pos;
  if (pos >= window.size()) return std::nullopt;

  if (window[pos] == '"' || window[pos] == '\'') {
    char quote = window[pos];
    std::size_t close = window.find(quote, pos + 1);
    if (close == std::string_view::npos || close == pos + 1) return std::nullopt;
    return std::string(window.substr(pos + 1, close - pos - 1));
  }
  if (is_value_char(window[pos])) {
    std::size_t end = pos;
    while (end < window.size() && is_value_char(window[end])) ++end;
    return std::string(window.substr(pos, end - pos));
  }
  // Fall back to the first quoted run anywhere in the window.
  for (std::size_t i = pos; i + 1 < window.size(); ++i) {
    if (window[i] == '"' || window[i] == '\'') {
      std::size_t close = window.find(window[i], i + 1);
      if (close != std::string_view::npos && close > i + 1) {
        return std::string(window.substr(i + 1, close - i - 1));
      }
      break;
    }
  }
  return std::nullopt;
}

void rewrite_json_strings(OrderedJson& value,
                          const std::vector<std::pair<std::string, std::string>>& subs) {
  if (value.is_string()) {
    std::string s = value.get<std::string>();
    std::string replaced = substitute_all(s, subs);
    if (replaced != s) value = replaced;
  } else if (value.is_object() || value.is_array()) {
    for (auto& child : value) rewrite_json_strings(child, subs);
  }
}

}  // namespace

std::optional<std::string> scrape_value_near(std::string_view body, std::string_view name) {
  if (name.empty()) return std::nullopt;
  std::size_t pos = 0;
  while ((pos = body.find(name, pos)) != std::string_view::npos) {
    std::string_view window = body.substr(pos + name.size(), kScrapeWindow);
    if (auto value = value_in_window(window)) return value;
    pos += name.size();
  }
  return std::nullopt;
}

std::string substitute_all(std::string_view text,
                           const std::vector<std::pair<std::string, std::string>>& subs) {
  if (subs.empty()) return std::string(text);
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    bool matched = false;
    for (const auto& [from, to] : subs) {
      if (!from.empty() && text.compare(pos, from.size(), from) == 0) {
        out += to;
        pos += from.size();
        matched = true;
        break;
      }
    }
    if (!matched) {
      out.push_back(text[pos]);
      ++pos;
    }
  }
  return out;
}

std::string ValueStore::connection_key(const HttpRequest& request) const {
  return request.client_addr + ":" + std::to_string(request.client_port);
}

std::string ValueStore::resolve_session(const HttpRequest& request) {
  std::lock_guard<std::mutex> lock(mutex_);
  // A cookie value issued by the main instance identifies the session even
  // across reconnects.
  for (const auto& [name, value] : parse_cookie_header(request.header("Cookie"))) {
    auto it = session_by_cookie_value_.find(value);
    if (it != session_by_cookie_value_.end()) return it->second;
  }
  const std::string conn = connection_key(request);
  auto it = session_by_connection_.find(conn);
  if (it != session_by_connection_.end()) return it->second;
  std::string session = "s" + std::to_string(next_session_++);
  session_by_connection_.emplace(conn, session);
  return session;
}

void ValueStore::note_cookies(const std::string& session, Side side,
                              const HttpResponse& response) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto& jar = jars_[session];
  for (const auto& value : response.header_values("Set-Cookie")) {
    auto cookie = parse_set_cookie(value);
    if (!cookie) continue;
    if (side == Side::main) {
      jar.main_cookies[cookie->first] = cookie->second;
      session_by_cookie_value_[cookie->second] = session;
    } else {
      jar.shadow_cookies[cookie->first] = cookie->second;
    }
  }
}

std::vector<ValueBinding> ValueStore::scrape_values(const HttpResponse& main_resp,
                                                    const HttpResponse& shadow_resp,
                                                    const RuleSet& rules,
                                                    const std::string& session,
                                                    std::vector<std::string>* warnings) {
  note_cookies(session, Side::main, main_resp);
  note_cookies(session, Side::shadow, shadow_resp);

  std::vector<ValueBinding> bindings;
  for (const auto& name : rules.characteristic_values()) {
    auto main_value = scrape_value_near(main_resp.body, name);
    auto shadow_value = scrape_value_near(shadow_resp.body, name);
    if (main_value && shadow_value) {
      ValueBinding b;
      b.name = name;
      b.main_value = *main_value;
      b.shadow_value = *shadow_value;
      b.session = session;
      b.observed_at = std::chrono::steady_clock::now();
      install_binding(b);
      bindings.push_back(std::move(b));
    } else if (main_value.has_value() != shadow_value.has_value()) {
      if (warnings) {
        warnings->push_back("characteristic value '" + name + "' found only in the " +
                            (main_value ? "main" : "shadow") + " response");
      }
    }
  }
  return bindings;
}

void ValueStore::install_binding(ValueBinding binding) {
  if (binding.main_value.empty() || binding.shadow_value.empty()) return;
  std::lock_guard<std::mutex> lock(mutex_);
  auto key = std::make_tuple(binding.session, binding.name, binding.main_value);
  bindings_[std::move(key)] = std::move(binding);
}

std::optional<std::string> ValueStore::map_identifier(const std::string& name,
                                                      const std::string& main_value,
                                                      const std::string& session) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = bindings_.find(std::make_tuple(session, name, main_value));
  if (it == bindings_.end()) return std::nullopt;
  return it->second.shadow_value;
}

CookieJarPair ValueStore::cookie_jar(const std::string& session) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = jars_.find(session);
  return it == jars_.end() ? CookieJarPair{} : it->second;
}

std::size_t ValueStore::binding_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return bindings_.size();
}

HttpRequest ValueStore::rewrite_request(const HttpRequest& request, const std::string& session,
                                        const UpstreamTarget& shadow,
                                        std::vector<std::string>* warnings) const {
  // Snapshot this session's substitutions, longest main value first.
  std::vector<std::pair<std::string, std::string>> subs;
  CookieJarPair jar;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto begin = bindings_.lower_bound(std::make_tuple(session, std::string(), std::string()));
    for (auto it = begin; it != bindings_.end() && std::get<0>(it->first) == session; ++it) {
      subs.emplace_back(it->second.main_value, it->second.shadow_value);
    }
    auto jit = jars_.find(session);
    if (jit != jars_.end()) jar = jit->second;
  }
  std::sort(subs.begin(), subs.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
  subs.erase(std::unique(subs.begin(), subs.end(),
                         [](const auto& a, const auto& b) { return a.first == b.first; }),
             subs.end());

  HttpRequest out = request;

  // Query string: parameters are percent-decoded for matching and only
  // re-encoded when a substitution applied.
  std::string query = out.query();
  if (!query.empty() && !subs.empty()) {
    auto params = split_form(query);
    bool changed = false;
    for (auto& p : params) {
      if (!p.has_value) continue;
      std::string decoded = percent_decode(p.raw_value, /*plus_as_space=*/true);
      std::string replaced = substitute_all(decoded, subs);
      if (replaced != decoded) {
        p.raw_value = percent_encode_form(replaced);
        changed = true;
      }
    }
    if (changed) out.target = out.path() + "?" + join_form(params);
  }

  // Header values, except the ones managed below.
  for (auto& [name, value] : out.headers) {
    if (iequals(name, "Host") || iequals(name, "Cookie") || iequals(name, "Content-Length") ||
        iequals(name, "Content-Type") || iequals(name, kPairingHeader)) {
      continue;
    }
    value = substitute_all(value, subs);
  }

  // Cookie header: the names the client sent, with values from the shadow
  // jar where known.
  if (out.has_header("Cookie")) {
    auto cookies = parse_cookie_header(out.header("Cookie"));
    std::string rebuilt;
    for (const auto& [name, value] : cookies) {
      if (!rebuilt.empty()) rebuilt += "; ";
      auto it = jar.shadow_cookies.find(name);
      rebuilt += name + "=" + (it != jar.shadow_cookies.end() ? it->second : value);
    }
    out.set_header("Cookie", rebuilt);
  }

  out.set_header("Host", shadow.host_header());

  // Body, by content type.
  const std::string media = out.media_type();
  const std::string content_encoding = to_lower(out.header("Content-Encoding"));
  if (!out.body.empty() && !content_encoding.empty() && content_encoding != "identity") {
    if (warnings) {
      warnings->push_back("unsupported content encoding '" + content_encoding +
                          "'; body forwarded unmodified");
    }
  } else if (!out.body.empty() && !subs.empty()) {
    if (media == "application/x-www-form-urlencoded") {
      auto params = split_form(out.body);
      bool changed = false;
      for (auto& p : params) {
        std::string_view raw = p.has_value ? p.raw_value : p.raw_key;
        std::string decoded = percent_decode(raw, /*plus_as_space=*/true);
        std::string replaced = substitute_all(decoded, subs);
        if (replaced != decoded) {
          (p.has_value ? p.raw_value : p.raw_key) = percent_encode_form(replaced);
          changed = true;
        }
      }
      if (changed) out.body = join_form(params);
    } else if (classify_media(media) == MediaClass::json) {
      bool any_occurs = false;
      for (const auto& [from, to] : subs) {
        if (out.body.find(from) != std::string::npos ||
            out.body.find(nlohmann::json(from).dump()) != std::string::npos) {
          any_occurs = true;
          break;
        }
      }
      if (any_occurs) {
        OrderedJson doc = OrderedJson::parse(out.body, nullptr, false);
        if (doc.is_discarded()) {
          out.body = substitute_all(out.body, subs);
        } else {
          rewrite_json_strings(doc, subs);
          out.body = doc.dump();
        }
      }
    } else if (media.rfind("multipart/", 0) == 0) {
      auto boundary = multipart_boundary(out.header("Content-Type"));
      auto decoded = boundary ? multipart_decode(out.body, *boundary) : std::nullopt;
      if (!decoded) {
        if (warnings) warnings->push_back("malformed multipart body forwarded unmodified");
      } else {
        bool changed = false;
        for (auto& part : decoded->parts) {
          if (!part.is_text()) continue;
          std::string replaced = substitute_all(part.body, subs);
          if (replaced != part.body) {
            part.body = std::move(replaced);
            changed = true;
          }
        }
        if (changed) {
          std::string new_boundary = fresh_boundary(*decoded);
          out.body = multipart_encode(*decoded, new_boundary);
          std::string ct = out.header("Content-Type");
          std::size_t bpos = to_lower(ct).find("boundary=");
          if (bpos == std::string::npos) {
            out.set_header("Content-Type", ct + "; boundary=" + new_boundary);
          } else {
            std::size_t bend = ct.find(';', bpos);
            std::string tail = (bend == std::string::npos) ? "" : ct.substr(bend);
            out.set_header("Content-Type",
                           ct.substr(0, bpos) + "boundary=" + new_boundary + tail);
          }
        }
      }
    } else {
      out.body = substitute_all(out.body, subs);
    }
  }

  if (!out.body.empty() || request.has_header("Content-Length")) {
    out.set_header("Content-Length", std::to_string(out.body.size()));
  }
  return out;
}

}  // namespace shadowdiff
