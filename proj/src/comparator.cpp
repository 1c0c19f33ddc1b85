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

#include "comparator.hpp"

#include <algorithm>

#include "encoding.hpp"
#include "json_compare.hpp"
#include "text_diff.hpp"

namespace shadowdiff {

namespace {

// Headers compared between paired responses. Set-Cookie and Date are
// instance-specific; the pairing header never reaches a response.
constexpr const char* kComparedHeaders[] = {"Content-Type", "Location"};

DifferenceToken synthetic_token(std::string main_token, std::string shadow_token,
                                ContextKind kind, std::string locator) {
  DifferenceToken t;
  t.main_token = std::move(main_token);
  t.shadow_token = std::move(shadow_token);
  t.context = {kind, std::move(locator)};
  t.forced_unexpected = true;
  return t;
}

std::string binary_preview(std::string_view body, std::size_t at) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  std::size_t end = std::min(body.size(), at + 16);
  for (std::size_t i = at; i < end; ++i) {
    unsigned char c = static_cast<unsigned char>(body[i]);
    out.push_back(hex[c >> 4]);
    out.push_back(hex[c & 0xF]);
  }
  if (out.empty()) out = "(end of body)";
  return out;
}

void compare_binary(const HttpResponse& main_resp, const HttpResponse& shadow_resp,
                    std::vector<DifferenceToken>& out) {
  if (main_resp.body == shadow_resp.body) return;
  std::size_t limit = std::min(main_resp.body.size(), shadow_resp.body.size());
  std::size_t at = 0;
  while (at < limit && main_resp.body[at] == shadow_resp.body[at]) ++at;
  DifferenceToken t = synthetic_token(
      binary_preview(main_resp.body, at), binary_preview(shadow_resp.body, at),
      ContextKind::raw_text, "binary body mismatch at offset " + std::to_string(at));
  t.main_offset = at;
  t.shadow_offset = at;
  out.push_back(std::move(t));
}

// Tokens that sit inside a tag on both sides are suppressed when the two
// tags normalize to the same character list (attribute reordering).
bool suppressed_by_tag_normalization(std::string_view main_body, std::string_view shadow_body,
                                     const DiffToken& tok) {
  auto main_tag = enclosing_tag(main_body, tok.main_offset);
  if (!main_tag || !main_tag->contains(tok.main_offset, tok.main_text.size())) return false;
  auto shadow_tag = enclosing_tag(shadow_body, tok.shadow_offset);
  if (!shadow_tag || !shadow_tag->contains(tok.shadow_offset, tok.shadow_text.size())) return false;
  return tags_equal_normalized(
      main_body.substr(main_tag->begin, main_tag->end - main_tag->begin),
      shadow_body.substr(shadow_tag->begin, shadow_tag->end - shadow_tag->begin));
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::equal: return "equal";
    case Verdict::expected_only: return "expected_only";
    case Verdict::alarm: return "alarm";
  }
  return "equal";
}

std::optional<std::string> classify(const DifferenceToken& token, const RuleSet& rules) {
  if (token.forced_unexpected) return std::nullopt;
  if (token.context.kind == ContextKind::raw_text) return std::nullopt;
  for (const auto& name : rules.expected_differences()) {
    if (token.context.locator.find(name) != std::string::npos) return name;
  }
  return std::nullopt;
}

std::vector<DifferenceToken> compare_text(std::string_view main_body,
                                          std::string_view shadow_body) {
  std::vector<DifferenceToken> out;
  for (DiffToken& raw : diff_tokens(main_body, shadow_body)) {
    DifferenceToken t;
    t.main_token = std::move(raw.main_text);
    t.shadow_token = std::move(raw.shadow_text);
    t.main_offset = raw.main_offset;
    t.shadow_offset = raw.shadow_offset;
    // Context comes from the side that actually carries text; insertions
    // have nothing to anchor to in the main body.
    if (!t.shadow_token.empty()) {
      t.context = extract_context(shadow_body, t.shadow_offset, t.shadow_token.size());
    } else {
      t.context = extract_context(main_body, t.main_offset, t.main_token.size());
    }
    out.push_back(std::move(t));
  }
  return out;
}

ComparisonOutcome compare_pair(const ResponsePair& pair, const RuleSet& rules) {
  ComparisonOutcome outcome;
  outcome.pair_key = pair_key_string(pair.key);
  outcome.request_summary = pair.request_summary;

  std::vector<DifferenceToken> tokens;

  if (!pair.complete()) {
    const char* missing = pair.main_response ? "shadow" : "main";
    const char* present = pair.main_response ? "main" : "shadow";
    tokens.push_back(synthetic_token(pair.main_response ? "response" : "",
                                     pair.shadow_response ? "response" : "",
                                     ContextKind::raw_text,
                                     std::string("no ") + missing + " response before the pair deadline (" +
                                         present + " side responded)"));
  } else {
    const HttpResponse& main_resp = *pair.main_response;
    const HttpResponse& shadow_resp = *pair.shadow_response;

    if (main_resp.status != shadow_resp.status) {
      tokens.push_back(synthetic_token(std::to_string(main_resp.status),
                                       std::to_string(shadow_resp.status),
                                       ContextKind::header_field, "status"));
    }

    const std::string main_type = main_resp.media_type();
    const std::string shadow_type = shadow_resp.media_type();
    if (main_type != shadow_type) {
      tokens.push_back(synthetic_token(main_resp.header("Content-Type"),
                                       shadow_resp.header("Content-Type"),
                                       ContextKind::header_field, "Content-Type"));
    } else {
      for (const char* name : kComparedHeaders) {
        std::string vm = main_resp.header(name);
        std::string vs = shadow_resp.header(name);
        if (vm != vs) {
          DifferenceToken t;
          t.main_token = vm;
          t.shadow_token = vs;
          t.context = {ContextKind::header_field, name};
          tokens.push_back(std::move(t));
        }
      }

      switch (classify_media(main_type)) {
        case MediaClass::json: {
          OrderedJson main_doc = OrderedJson::parse(main_resp.body, nullptr, false);
          OrderedJson shadow_doc = OrderedJson::parse(shadow_resp.body, nullptr, false);
          if (main_doc.is_discarded() || shadow_doc.is_discarded()) {
            outcome.warnings.push_back("declared JSON body failed to parse; compared as text");
            for (auto& t : compare_text(main_resp.body, shadow_resp.body)) {
              tokens.push_back(std::move(t));
            }
            break;
          }
          for (auto& d : compare_json(main_doc, shadow_doc)) {
            DifferenceToken t;
            t.main_token = std::move(d.main_text);
            t.shadow_token = std::move(d.shadow_text);
            std::size_t found_main = t.main_token.empty()
                                         ? std::string::npos
                                         : main_resp.body.find(t.main_token);
            std::size_t found_shadow = t.shadow_token.empty()
                                           ? std::string::npos
                                           : shadow_resp.body.find(t.shadow_token);
            t.main_offset = found_main;
            t.shadow_offset = found_shadow;
            t.context = {ContextKind::json_path, std::move(d.path)};
            tokens.push_back(std::move(t));
          }
          break;
        }
        case MediaClass::text:
        case MediaClass::none: {
          for (DiffToken& raw : diff_tokens(main_resp.body, shadow_resp.body)) {
            if (suppressed_by_tag_normalization(main_resp.body, shadow_resp.body, raw)) continue;
            DifferenceToken t;
            t.main_token = std::move(raw.main_text);
            t.shadow_token = std::move(raw.shadow_text);
            t.main_offset = raw.main_offset;
            t.shadow_offset = raw.shadow_offset;
            if (!t.shadow_token.empty()) {
              t.context = extract_context(shadow_resp.body, t.shadow_offset, t.shadow_token.size());
            } else {
              t.context = extract_context(main_resp.body, t.main_offset, t.main_token.size());
            }
            tokens.push_back(std::move(t));
          }
          break;
        }
        case MediaClass::binary: {
          compare_binary(main_resp, shadow_resp, tokens);
          break;
        }
      }
    }
  }

  for (auto& token : tokens) {
    if (auto rule = classify(token, rules)) {
      outcome.expected.push_back({std::move(token), std::move(*rule)});
    } else {
      outcome.unexpected.push_back(std::move(token));
    }
  }

  if (!outcome.unexpected.empty()) {
    outcome.verdict = Verdict::alarm;
  } else if (!outcome.expected.empty()) {
    outcome.verdict = Verdict::expected_only;
  } else {
    outcome.verdict = Verdict::equal;
  }
  return outcome;
}

}  // namespace shadowdiff
