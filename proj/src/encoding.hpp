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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shadowdiff {

/// Percent-decoding. Invalid escape sequences are passed through untouched.
/// With `plus_as_space`, '+' decodes to ' ' (form semantics).
std::string percent_decode(std::string_view in, bool plus_as_space);

/// Canonical form-style encoding: unreserved characters [A-Za-z0-9-._~]
/// verbatim, space as '+', everything else %XX with uppercase hex.
std::string percent_encode_form(std::string_view in);

/// One `key=value` (or bare `key`) segment of a form body or query string.
/// Raw pieces keep their original bytes so untouched parameters can be
/// reassembled without re-encoding.
struct FormParam {
  std::string raw_key;
  std::string raw_value;
  bool has_value = false;
};

std::vector<FormParam> split_form(std::string_view body);
std::string join_form(const std::vector<FormParam>& params);

/// Cookie request-header parsing: "a=1; b=2" -> [(a,1),(b,2)].
std::vector<std::pair<std::string, std::string>> parse_cookie_header(std::string_view value);

/// First name=value of a Set-Cookie header; attributes are dropped.
std::optional<std::pair<std::string, std::string>> parse_set_cookie(std::string_view value);

// ---------------------------------------------------------------------------
// multipart/form-data

struct MultipartPart {
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  std::string header(std::string_view name) const;  // case-insensitive, "" if absent
  /// Parameter of the Content-Disposition header, e.g. name or filename.
  std::string disposition_param(std::string_view key) const;
  /// Text parts (no filename, no content type or a text/* one) are eligible
  /// for value substitution; everything else is treated as opaque bytes.
  bool is_text() const;
};

struct MultipartBody {
  std::vector<MultipartPart> parts;
};

/// Extracts boundary= from a Content-Type header value.
std::optional<std::string> multipart_boundary(std::string_view content_type);

/// Strict CRLF decoder. Returns nullopt when the framing is malformed.
std::optional<MultipartBody> multipart_decode(std::string_view body, std::string_view boundary);

std::string multipart_encode(const MultipartBody& mp, std::string_view boundary);

/// Boundary not occurring in any part header or body.
std::string fresh_boundary(const MultipartBody& mp);

/// ASCII case-insensitive equality, used for header names throughout.
bool iequals(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);

/// FNV-1a 64-bit; stable content digest used by the fixture app.
std::uint64_t fnv1a64(std::string_view data);
std::string to_hex(std::uint64_t v);

}  // namespace shadowdiff
