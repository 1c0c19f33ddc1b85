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

#include "html_context.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "encoding.hpp"

namespace shadowdiff {

namespace {

constexpr std::size_t kRawWindow = 64;

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
}

bool is_void_element(std::string_view name) {
  static const char* kVoid[] = {"area",  "base", "br",   "col",  "embed",  "hr",    "img",
                                "input", "link", "meta", "param", "source", "track", "wbr"};
  for (const char* v : kVoid) {
    if (iequals(name, v)) return true;
  }
  return false;
}

bool is_raw_text_element(std::string_view name) {
  return iequals(name, "script") || iequals(name, "style") || iequals(name, "textarea") ||
         iequals(name, "title");
}

enum class TagKind { open, close, self_closing, comment, declaration };

struct ScannedTag {
  TagKind kind = TagKind::open;
  std::string name;     // lowercased element name; empty for comments/declarations
  std::size_t begin = 0;  // '<'
  std::size_t end = 0;    // one past '>'
};

// Scans the next tag starting exactly at body[pos] == '<'. Returns nullopt
// for markup that never closes.
std::optional<ScannedTag> scan_tag(std::string_view body, std::size_t pos) {
  ScannedTag tag;
  tag.begin = pos;
  if (body.compare(pos, 4, "<!--") == 0) {
    std::size_t close = body.find("-->", pos + 4);
    if (close == std::string_view::npos) return std::nullopt;
    tag.kind = TagKind::comment;
    tag.end = close + 3;
    return tag;
  }
  if (pos + 1 < body.size() && (body[pos + 1] == '!' || body[pos + 1] == '?')) {
    std::size_t close = body.find('>', pos + 1);
    if (close == std::string_view::npos) return std::nullopt;
    tag.kind = TagKind::declaration;
    tag.end = close + 1;
    return tag;
  }

  std::size_t cursor = pos + 1;
  bool closing = false;
  if (cursor < body.size() && body[cursor] == '/') {
    closing = true;
    ++cursor;
  }
  std::size_t name_start = cursor;
  while (cursor < body.size() && is_name_char(body[cursor])) ++cursor;
  if (cursor == name_start) return std::nullopt;  // bare '<' in text
  tag.name = to_lower(body.substr(name_start, cursor - name_start));

  // Find the terminating '>', skipping quoted attribute values.
  char quote = 0;
  char last_meaningful = 0;
  while (cursor < body.size()) {
    char c = body[cursor];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      tag.end = cursor + 1;
      if (closing) {
        tag.kind = TagKind::close;
      } else if (last_meaningful == '/') {
        tag.kind = TagKind::self_closing;
      } else {
        tag.kind = TagKind::open;
      }
      return tag;
    }
    if (!std::isspace(static_cast<unsigned char>(c))) last_meaningful = c;
    ++cursor;
  }
  return std::nullopt;
}

struct ElementSpan {
  std::string name;
  std::size_t open_begin = 0;  // '<' of the open tag
  std::size_t open_end = 0;    // one past '>' of the open tag
};

}  // namespace

std::string_view to_string(ContextKind kind) {
  switch (kind) {
    case ContextKind::html_tag: return "html_tag";
    case ContextKind::json_path: return "json_path";
    case ContextKind::header_field: return "header_field";
    case ContextKind::raw_text: return "raw_text";
  }
  return "raw_text";
}

std::optional<ContextKind> context_kind_from_string(std::string_view s) {
  if (s == "html_tag") return ContextKind::html_tag;
  if (s == "json_path") return ContextKind::json_path;
  if (s == "header_field") return ContextKind::header_field;
  if (s == "raw_text") return ContextKind::raw_text;
  return std::nullopt;
}

std::optional<TagSpan> enclosing_tag(std::string_view body, std::size_t offset) {
  // Walk tags from the start; the scanner is cheap relative to body sizes
  // seen here and avoids misreading quoted '<'/'>' characters.
  std::size_t pos = 0;
  while (pos < body.size() && pos <= offset) {
    std::size_t lt = body.find('<', pos);
    if (lt == std::string_view::npos || lt > offset) return std::nullopt;
    auto tag = scan_tag(body, lt);
    if (!tag) return std::nullopt;
    if (tag->end > offset) {
      if (tag->kind == TagKind::comment || tag->kind == TagKind::declaration) return std::nullopt;
      return TagSpan{tag->begin, tag->end};
    }
    // Raw-text element content can contain '<' that is not markup.
    if (tag->kind == TagKind::open && is_raw_text_element(tag->name)) {
      std::string close_mark = "</" + tag->name;
      std::size_t content_end = body.size();
      std::size_t search = tag->end;
      while (search < body.size()) {
        std::size_t cand = body.find('<', search);
        if (cand == std::string_view::npos) break;
        if (body.size() - cand >= close_mark.size() &&
            iequals(body.substr(cand, close_mark.size()), close_mark)) {
          content_end = cand;
          break;
        }
        search = cand + 1;
      }
      if (offset < content_end) return std::nullopt;  // inside raw text content
      pos = content_end;
      continue;
    }
    pos = tag->end;
  }
  return std::nullopt;
}

DifferenceContext extract_context(std::string_view body, std::size_t offset, std::size_t len) {
  offset = std::min(offset, body.size());

  std::vector<ElementSpan> stack;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t lt = body.find('<', pos);
    if (lt == std::string_view::npos || lt >= offset) break;
    auto tag = scan_tag(body, lt);
    if (!tag) break;

    if (tag->end > offset) {
      // Token inside this tag's own text.
      if (tag->kind == TagKind::comment || tag->kind == TagKind::declaration) break;
      return {ContextKind::html_tag, std::string(body.substr(tag->begin, tag->end - tag->begin))};
    }

    switch (tag->kind) {
      case TagKind::open:
        if (is_raw_text_element(tag->name)) {
          // Consume raw content up to the matching close tag.
          std::string close_mark = "</" + tag->name;
          std::size_t content_end = body.size();
          std::size_t close_end = body.size();
          std::size_t search = tag->end;
          while (search < body.size()) {
            std::size_t cand = body.find('<', search);
            if (cand == std::string_view::npos) break;
            if (body.size() - cand >= close_mark.size() &&
                iequals(body.substr(cand, close_mark.size()), close_mark)) {
              content_end = cand;
              std::size_t gt = body.find('>', cand);
              close_end = (gt == std::string_view::npos) ? body.size() : gt + 1;
              break;
            }
            search = cand + 1;
          }
          if (offset >= tag->end && offset < content_end) {
            // Raw-text content carries the interesting part (inline script
            // variables and the like); return the whole element.
            return {ContextKind::html_tag,
                    std::string(body.substr(tag->begin, close_end - tag->begin))};
          }
          pos = close_end;
          continue;
        }
        if (!is_void_element(tag->name)) {
          stack.push_back({tag->name, tag->begin, tag->end});
        }
        break;
      case TagKind::close: {
        // Pop to the matching open element, tolerating unbalanced markup.
        for (std::size_t i = stack.size(); i > 0; --i) {
          if (stack[i - 1].name == tag->name) {
            stack.resize(i - 1);
            break;
          }
        }
        break;
      }
      case TagKind::self_closing:
      case TagKind::comment:
      case TagKind::declaration:
        break;
    }
    pos = tag->end;
  }

  if (!stack.empty()) {
    const ElementSpan& innermost = stack.back();
    return {ContextKind::html_tag,
            std::string(body.substr(innermost.open_begin, innermost.open_end - innermost.open_begin))};
  }

  // Raw-text fallback: a fixed window centered on the token.
  std::size_t mid = offset + std::min(len, body.size() - offset) / 2;
  std::size_t start = (mid > kRawWindow / 2) ? mid - kRawWindow / 2 : 0;
  if (start + kRawWindow > body.size()) {
    start = (body.size() > kRawWindow) ? body.size() - kRawWindow : 0;
  }
  std::string window(body.substr(start, kRawWindow));
  if (window.empty()) window = "(empty body)";
  return {ContextKind::raw_text, std::move(window)};
}

bool tags_equal_normalized(std::string_view tag_main, std::string_view tag_shadow) {
  auto normalize = [](std::string_view tag) {
    std::string letters;
    letters.reserve(tag.size());
    for (char c : tag) {
      if (std::isalpha(static_cast<unsigned char>(c))) letters.push_back(c);
    }
    std::sort(letters.begin(), letters.end());
    return letters;
  };
  return normalize(tag_main) == normalize(tag_shadow);
}

}  // namespace shadowdiff
