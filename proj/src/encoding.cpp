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

#include "encoding.hpp"

#include <atomic>
#include <cctype>
#include <random>

#include "rules.hpp"

namespace shadowdiff {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool is_unreserved(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
         c == '-' || c == '.' || c == '_' || c == '~';
}

constexpr std::string_view kCrlf = "\r\n";

}  // namespace

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string percent_decode(std::string_view in, bool plus_as_space) {
  std::string out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    char c = in[i];
    if (c == '%' && i + 2 < in.size()) {
      int hi = hex_digit(in[i + 1]);
      int lo = hex_digit(in[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>((hi << 4) | lo));
        i += 2;
        continue;
      }
    }
    if (plus_as_space && c == '+') {
      out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string percent_encode_form(std::string_view in) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  out.reserve(in.size());
  for (char c : in) {
    if (is_unreserved(c)) {
      out.push_back(c);
    } else if (c == ' ') {
      out.push_back('+');
    } else {
      unsigned char u = static_cast<unsigned char>(c);
      out.push_back('%');
      out.push_back(hex[u >> 4]);
      out.push_back(hex[u & 0xF]);
    }
  }
  return out;
}

std::vector<FormParam> split_form(std::string_view body) {
  std::vector<FormParam> params;
  if (body.empty()) return params;
  std::size_t pos = 0;
  for (;;) {
    std::size_t amp = body.find('&', pos);
    std::string_view seg =
        (amp == std::string_view::npos) ? body.substr(pos) : body.substr(pos, amp - pos);
    FormParam p;
    std::size_t eq = seg.find('=');
    if (eq == std::string_view::npos) {
      p.raw_key = std::string(seg);
    } else {
      p.raw_key = std::string(seg.substr(0, eq));
      p.raw_value = std::string(seg.substr(eq + 1));
      p.has_value = true;
    }
    params.push_back(std::move(p));
    if (amp == std::string_view::npos) break;
    pos = amp + 1;
  }
  return params;
}

std::string join_form(const std::vector<FormParam>& params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out.push_back('&');
    out += params[i].raw_key;
    if (params[i].has_value) {
      out.push_back('=');
      out += params[i].raw_value;
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_cookie_header(std::string_view value) {
  std::vector<std::pair<std::string, std::string>> cookies;
  std::size_t pos = 0;
  while (pos < value.size()) {
    std::size_t semi = value.find(';', pos);
    std::string_view item =
        (semi == std::string_view::npos) ? value.substr(pos) : value.substr(pos, semi - pos);
    item = trim(item);
    if (!item.empty()) {
      std::size_t eq = item.find('=');
      if (eq != std::string_view::npos) {
        cookies.emplace_back(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
      }
    }
    if (semi == std::string_view::npos) break;
    pos = semi + 1;
  }
  return cookies;
}

std::optional<std::pair<std::string, std::string>> parse_set_cookie(std::string_view value) {
  std::size_t semi = value.find(';');
  std::string_view item = (semi == std::string_view::npos) ? value : value.substr(0, semi);
  item = trim(item);
  std::size_t eq = item.find('=');
  if (eq == std::string_view::npos || eq == 0) return std::nullopt;
  return std::make_pair(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
}

// ---------------------------------------------------------------------------
// multipart/form-data

std::string MultipartPart::header(std::string_view name) const {
  for (const auto& [k, v] : headers) {
    if (iequals(k, name)) return v;
  }
  return "";
}

std::string MultipartPart::disposition_param(std::string_view key) const {
  std::string disp = header("Content-Disposition");
  // name="value" or name=value, scanned left to right
  std::size_t pos = 0;
  while (pos < disp.size()) {
    std::size_t semi = disp.find(';', pos);
    std::string_view item = (semi == std::string::npos)
                                ? std::string_view(disp).substr(pos)
                                : std::string_view(disp).substr(pos, semi - pos);
    item = trim(item);
    std::size_t eq = item.find('=');
    if (eq != std::string_view::npos && iequals(item.substr(0, eq), key)) {
      std::string_view v = item.substr(eq + 1);
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        v = v.substr(1, v.size() - 2);
      }
      return std::string(v);
    }
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  return "";
}

bool MultipartPart::is_text() const {
  if (!disposition_param("filename").empty()) return false;
  std::string ct = header("Content-Type");
  if (ct.empty()) return true;
  std::string lowered = to_lower(ct);
  return lowered.rfind("text/", 0) == 0;
}

std::optional<std::string> multipart_boundary(std::string_view content_type) {
  std::string lowered = to_lower(content_type);
  std::size_t pos = lowered.find("boundary=");
  if (pos == std::string::npos) return std::nullopt;
  std::string_view v = content_type.substr(pos + 9);
  std::size_t semi = v.find(';');
  if (semi != std::string_view::npos) v = v.substr(0, semi);
  v = trim(v);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  if (v.empty()) return std::nullopt;
  return std::string(v);
}

std::optional<MultipartBody> multipart_decode(std::string_view body, std::string_view boundary) {
  MultipartBody out;
  const std::string dash_boundary = "--" + std::string(boundary);
  const std::string delimiter = "\r\n" + dash_boundary;

  // The first delimiter may appear without the leading CRLF at offset 0.
  std::size_t cursor;
  if (body.rfind(dash_boundary, 0) == 0) {
    cursor = dash_boundary.size();
  } else {
    std::size_t first = body.find(delimiter);
    if (first == std::string_view::npos) return std::nullopt;
    cursor = first + delimiter.size();
  }

  while (true) {
    if (body.substr(cursor, 2) == "--") return out;  // close delimiter, ignore epilogue
    // transport padding then CRLF
    while (cursor < body.size() && (body[cursor] == ' ' || body[cursor] == '\t')) ++cursor;
    if (body.substr(cursor, 2) != kCrlf) return std::nullopt;
    cursor += 2;

    MultipartPart part;
    // headers until blank line
    while (true) {
      std::size_t eol = body.find(kCrlf, cursor);
      if (eol == std::string_view::npos) return std::nullopt;
      std::string_view line = body.substr(cursor, eol - cursor);
      cursor = eol + 2;
      if (line.empty()) break;
      std::size_t colon = line.find(':');
      if (colon == std::string_view::npos) return std::nullopt;
      part.headers.emplace_back(std::string(trim(line.substr(0, colon))),
                                std::string(trim(line.substr(colon + 1))));
    }
    std::size_t next = body.find(delimiter, cursor);
    if (next == std::string_view::npos) return std::nullopt;
    part.body = std::string(body.substr(cursor, next - cursor));
    out.parts.push_back(std::move(part));
    cursor = next + delimiter.size();
  }
}

std::string multipart_encode(const MultipartBody& mp, std::string_view boundary) {
  std::string out;
  for (const auto& part : mp.parts) {
    out += "--";
    out += boundary;
    out += kCrlf;
    for (const auto& [k, v] : part.headers) {
      out += k;
      out += ": ";
      out += v;
      out += kCrlf;
    }
    out += kCrlf;
    out += part.body;
    out += kCrlf;
  }
  out += "--";
  out += boundary;
  out += "--";
  out += kCrlf;
  return out;
}

std::string fresh_boundary(const MultipartBody& mp) {
  static std::atomic<std::uint64_t> counter{0};
  std::random_device rd;
  for (;;) {
    std::uint64_t salt = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
                         counter.fetch_add(1, std::memory_order_relaxed);
    std::string candidate = "sdfb" + to_hex(salt) + to_hex(fnv1a64(std::to_string(salt)));
    bool collides = false;
    for (const auto& part : mp.parts) {
      if (part.body.find(candidate) != std::string::npos) collides = true;
      for (const auto& [k, v] : part.headers) {
        if (v.find(candidate) != std::string::npos) collides = true;
      }
    }
    if (!collides) return candidate;
  }
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string to_hex(std::uint64_t v) {
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace shadowdiff
