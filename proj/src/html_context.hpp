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

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace shadowdiff {

enum class ContextKind { html_tag, json_path, header_field, raw_text };

std::string_view to_string(ContextKind kind);
std::optional<ContextKind> context_kind_from_string(std::string_view s);

/// Where a difference token sits in its response: for html_tag the enclosing
/// tag (or element) text, for json_path the root-to-leaf attribute path, for
/// header_field the header name, for raw_text a fixed window around the
/// token.
struct DifferenceContext {
  ContextKind kind = ContextKind::raw_text;
  std::string locator;

  bool operator==(const DifferenceContext&) const = default;
};

/// Half-open byte range of a full "<...>" tag in a body.
struct TagSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool contains(std::size_t offset, std::size_t len) const {
    return offset >= begin && offset + len <= end;
  }
};

/// The tag whose "<...>" text covers `offset`, if any. Quote-aware: a '>'
/// inside a quoted attribute value does not terminate the tag.
std::optional<TagSpan> enclosing_tag(std::string_view body, std::size_t offset);

/// Context for a token at [offset, offset+len) in `body`. Tokens inside a
/// tag get that tag's text; tokens in element content get the innermost open
/// element (full element text for raw-text elements such as script and
/// style, the open tag otherwise). Anything else falls back to a 64-char
/// raw-text window; malformed markup never fails.
DifferenceContext extract_context(std::string_view body, std::size_t offset, std::size_t len);

/// True when two open tags are equal after dropping non-alphabetic
/// characters and sorting the rest — the attribute-order normalization used
/// to suppress reordered-attribute false positives. By construction,
/// attribute-name anagrams ("name" vs "eman") also compare equal; single
/// letter changes in names or values do not.
bool tags_equal_normalized(std::string_view tag_main, std::string_view tag_shadow);

}  // namespace shadowdiff
