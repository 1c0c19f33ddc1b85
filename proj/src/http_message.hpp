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

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shadowdiff {

/// Which of the two application instances a message belongs to.
enum class Side { main, shadow };

using HeaderList = std::vector<std::pair<std::string, std::string>>;

/// A fully buffered response: transfer decoding already applied, body held
/// in memory. Header names compare case-insensitively.
struct HttpResponse {
  int status = 0;
  HeaderList headers;
  std::string body;

  std::string header(std::string_view name) const;
  std::vector<std::string> header_values(std::string_view name) const;
  bool has_header(std::string_view name) const;
  /// "type/subtype" of Content-Type, lowercased, parameters stripped;
  /// empty when the header is absent.
  std::string media_type() const;
};

/// A client request as accepted by the proxy. `target` is the origin-form
/// request target (path plus optional query).
struct HttpRequest {
  std::string method;
  std::string target;
  HeaderList headers;
  std::string body;
  std::string client_addr;
  int client_port = 0;

  std::string path() const;
  std::string query() const;  // without '?'
  std::string header(std::string_view name) const;
  bool has_header(std::string_view name) const;
  void set_header(std::string_view name, std::string_view value);  // replaces all
  void remove_header(std::string_view name);
  std::string media_type() const;

  std::string summary() const;  // "GET /path"
};

enum class MediaClass { json, text, binary, none };

/// Comparison dispatch: JSON media types, textual ones (HTML, JavaScript,
/// XML, plain text, form encodings), or opaque bytes.
MediaClass classify_media(std::string_view media_type);

std::string parse_media_type(std::string_view content_type);

}  // namespace shadowdiff
