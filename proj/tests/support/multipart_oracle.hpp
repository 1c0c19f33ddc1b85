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

// Independent multipart parser used only as a test oracle. Deliberately a
// different algorithm from the production decoder: split the body on
// delimiter occurrences, then peel headers per fragment.

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace test_support {

struct OraclePart {
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;

  std::string header(std::string_view name) const {
    for (const auto& [k, v] : headers) {
      if (k.size() == name.size()) {
        bool equal = true;
        for (std::size_t i = 0; i < k.size(); ++i) {
          char a = static_cast<char>(::tolower(static_cast<unsigned char>(k[i])));
          char b = static_cast<char>(::tolower(static_cast<unsigned char>(name[i])));
          if (a != b) equal = false;
        }
        if (equal) return v;
      }
    }
    return "";
  }
};

inline std::vector<OraclePart> decode_multipart_independent(std::string_view body,
                                                            std::string_view boundary) {
  std::vector<OraclePart> parts;
  const std::string delim = "--" + std::string(boundary);

  // Collect every delimiter occurrence that sits at the start of a line.
  std::vector<std::size_t> marks;
  std::size_t pos = 0;
  while ((pos = body.find(delim, pos)) != std::string_view::npos) {
    if (pos == 0 || (pos >= 2 && body[pos - 2] == '\r' && body[pos - 1] == '\n')) {
      marks.push_back(pos);
    }
    pos += delim.size();
  }

  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    std::size_t fragment_start = marks[i] + delim.size();
    // closing delimiter of the previous fragment ends this scan
    if (body.substr(fragment_start, 2) == "--") break;
    std::size_t line_end = body.find("\r\n", fragment_start);
    if (line_end == std::string_view::npos) break;
    std::size_t content_begin = line_end + 2;
    std::size_t content_end = marks[i + 1] >= 2 ? marks[i + 1] - 2 : marks[i + 1];

    std::string_view fragment = body.substr(content_begin, content_end - content_begin);
    OraclePart part;
    // headers run to the first blank line
    std::size_t cursor = 0;
    while (true) {
      std::size_t eol = fragment.find("\r\n", cursor);
      if (eol == std::string_view::npos) break;
      std::string_view line = fragment.substr(cursor, eol - cursor);
      cursor = eol + 2;
      if (line.empty()) break;
      std::size_t colon = line.find(':');
      if (colon == std::string_view::npos) break;
      std::string name(line.substr(0, colon));
      std::string_view value = line.substr(colon + 1);
      while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
      part.headers.emplace_back(std::move(name), std::string(value));
    }
    part.body = std::string(fragment.substr(cursor));
    parts.push_back(std::move(part));
  }
  return parts;
}

}  // namespace test_support
