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

#include "learning.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

namespace shadowdiff {

namespace {

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

struct TagAttribute {
  std::string name;
  std::string value;
};

// Attributes of the first tag in `tag_text` ("<input name=... value=...>").
std::vector<TagAttribute> parse_tag_attributes(std::string_view tag_text) {
  std::vector<TagAttribute> attrs;
  std::size_t pos = tag_text.find('<');
  if (pos == std::string_view::npos) return attrs;
  ++pos;
  // skip element name
  while (pos < tag_text.size() && !std::isspace(static_cast<unsigned char>(tag_text[pos])) &&
         tag_text[pos] != '>') {
    ++pos;
  }
  while (pos < tag_text.size() && tag_text[pos] != '>') {
    while (pos < tag_text.size() && std::isspace(static_cast<unsigned char>(tag_text[pos]))) ++pos;
    if (pos >= tag_text.size() || tag_text[pos] == '>' || tag_text[pos] == '/') break;
    std::size_t name_start = pos;
    while (pos < tag_text.size() && tag_text[pos] != '=' && tag_text[pos] != '>' &&
           !std::isspace(static_cast<unsigned char>(tag_text[pos]))) {
      ++pos;
    }
    TagAttribute attr;
    attr.name = std::string(tag_text.substr(name_start, pos - name_start));
    if (pos < tag_text.size() && tag_text[pos] == '=') {
      ++pos;
      if (pos < tag_text.size() && (tag_text[pos] == '"' || tag_text[pos] == '\'')) {
        char quote = tag_text[pos];
        std::size_t close = tag_text.find(quote, pos + 1);
        if (close == std::string_view::npos) break;
        attr.value = std::string(tag_text.substr(pos + 1, close - pos - 1));
        pos = close + 1;
      } else {
        std::size_t value_start = pos;
        while (pos < tag_text.size() && !std::isspace(static_cast<unsigned char>(tag_text[pos])) &&
               tag_text[pos] != '>') {
          ++pos;
        }
        attr.value = std::string(tag_text.substr(value_start, pos - value_start));
      }
    }
    if (!attr.name.empty()) attrs.push_back(std::move(attr));
  }
  return attrs;
}

// Identifier assigned just before `at` in script-like text, as in
//   csrf_token: "…"   or   token = '…'
std::string assignment_identifier_before(std::string_view text, std::size_t at) {
  std::size_t pos = at;
  auto skip_back_ws = [&]() {
    while (pos > 0 && std::isspace(static_cast<unsigned char>(text[pos - 1]))) --pos;
  };
  skip_back_ws();
  if (pos > 0 && (text[pos - 1] == '"' || text[pos - 1] == '\'')) --pos;
  skip_back_ws();
  if (pos == 0 || (text[pos - 1] != ':' && text[pos - 1] != '=')) return "";
  --pos;
  skip_back_ws();
  if (pos > 0 && (text[pos - 1] == '"' || text[pos - 1] == '\'')) --pos;
  std::size_t end = pos;
  while (pos > 0 && is_ident_char(text[pos - 1])) --pos;
  return std::string(text.substr(pos, end - pos));
}

std::string strip_array_index(std::string_view segment) {
  std::size_t bracket = segment.find('[');
  if (bracket == std::string_view::npos) return std::string(segment);
  return std::string(segment.substr(0, bracket));
}

void push_unique(std::vector<std::string>& names, std::string name) {
  if (name.empty()) return;
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    names.push_back(std::move(name));
  }
}

}  // namespace

std::string format_special(const DifferenceRecord& record) {
  const std::string& token_text =
      record.token.shadow_token.empty() ? std::string("<absent>") : record.token.shadow_token;
  std::string out = "token: " + token_text;
  switch (record.token.context.kind) {
    case ContextKind::json_path:
      out += " found at path: " + record.token.context.locator + "\n";
      break;
    case ContextKind::header_field:
      out += " found in header: " + record.token.context.locator + "\n";
      break;
    case ContextKind::html_tag:
    case ContextKind::raw_text:
      out += " found in tag:\n" + record.token.context.locator + "\n";
      break;
  }
  return out;
}

std::vector<std::string> candidate_names(const DifferenceToken& token) {
  std::vector<std::string> names;
  const std::string& text = token.shadow_token.empty() ? token.main_token : token.shadow_token;
  if (text.empty()) return names;

  switch (token.context.kind) {
    case ContextKind::html_tag: {
      const std::string& locator = token.context.locator;
      auto attrs = parse_tag_attributes(locator);
      std::string form_name;
      bool token_in_name_attr = false;
      for (const auto& attr : attrs) {
        if (attr.name == "name") form_name = attr.value;
      }
      for (const auto& attr : attrs) {
        if (!attr.value.empty() && attr.value.find(text) != std::string::npos) {
          push_unique(names, attr.name);
          if (attr.name == "name") token_in_name_attr = true;
        }
      }
      if (!form_name.empty() && !token_in_name_attr && !names.empty()) {
        push_unique(names, form_name);
      }
      // Script-style assignments live past the open tag.
      std::size_t tag_end = locator.find('>');
      if (tag_end != std::string::npos) {
        std::size_t occurrence = locator.find(text, tag_end);
        while (occurrence != std::string::npos) {
          push_unique(names, assignment_identifier_before(locator, occurrence));
          occurrence = locator.find(text, occurrence + 1);
        }
      }
      break;
    }
    case ContextKind::json_path: {
      const std::string& path = token.context.locator;
      std::size_t pos = 0;
      while (pos <= path.size()) {
        std::size_t dot = path.find('.', pos);
        std::string_view segment = (dot == std::string::npos)
                                       ? std::string_view(path).substr(pos)
                                       : std::string_view(path).substr(pos, dot - pos);
        push_unique(names, strip_array_index(segment));
        if (dot == std::string::npos) break;
        pos = dot + 1;
      }
      break;
    }
    case ContextKind::header_field:
      push_unique(names, token.context.locator);
      break;
    case ContextKind::raw_text:
      break;
  }
  return names;
}

std::vector<RuleCandidate> suggest_rules(const std::vector<DifferenceRecord>& records,
                                         std::size_t min_support) {
  struct Tally {
    std::set<std::string> pairs;
    const DifferenceRecord* sample = nullptr;
  };
  std::map<std::string, Tally> tallies;
  for (const auto& record : records) {
    for (auto& name : candidate_names(record.token)) {
      Tally& tally = tallies[name];
      tally.pairs.insert(record.pair_key);
      if (!tally.sample) tally.sample = &record;
    }
  }
  const std::size_t effective_support = std::max<std::size_t>(min_support, 1);
  std::vector<RuleCandidate> candidates;
  for (auto& [name, tally] : tallies) {
    if (tally.pairs.size() >= effective_support) {
      candidates.push_back({name, tally.pairs.size(), *tally.sample});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.support != b.support) return a.support > b.support;
    return a.name < b.name;
  });
  return candidates;
}

std::string render_rule_file(const std::vector<RuleCandidate>& candidates,
                             std::size_t min_support, const RuleSet* base) {
  std::string out = "# rule candidates (min_support=" + std::to_string(min_support) + ")\n";
  std::set<std::string> emitted;
  if (base) {
    for (const auto& name : base->expected_differences()) emitted.insert(name);
  }
  for (const auto& candidate : candidates) {
    if (emitted.count(candidate.name)) continue;
    emitted.insert(candidate.name);
    out += "# support=" + std::to_string(candidate.support) + "\n";
    out += ":" + candidate.name + "\n";
  }
  if (base && !base->empty()) {
    out += "# carried over\n";
    for (const auto& name : base->expected_differences()) {
      out += ":" + name + "\n";
    }
    for (const auto& name : base->characteristic_values()) {
      out += "+" + name + "\n";
    }
  }
  return out;
}

std::string outcome_to_json_line(const ComparisonOutcome& outcome, double time) {
  nlohmann::json line;
  line["time"] = time;
  line["pair_key"] = outcome.pair_key;
  line["request_summary"] = outcome.request_summary;
  line["verdict"] = std::string(to_string(outcome.verdict));
  auto unexpected = nlohmann::json::array();
  for (const auto& token : outcome.unexpected) {
    unexpected.push_back({{"main_token", token.main_token},
                          {"shadow_token", token.shadow_token},
                          {"context_kind", std::string(to_string(token.context.kind))},
                          {"locator", token.context.locator}});
  }
  line["unexpected"] = std::move(unexpected);
  auto expected = nlohmann::json::array();
  for (const auto& match : outcome.expected) {
    expected.push_back(match.rule);
  }
  line["expected"] = std::move(expected);
  return line.dump();
}

std::vector<DifferenceRecord> load_difference_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open difference log: " + path);
  }
  std::vector<DifferenceRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto doc = nlohmann::json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw std::runtime_error("difference log line " + std::to_string(line_no) +
                               " is not a JSON object");
    }
    DifferenceRecord base;
    base.time = doc.value("time", 0.0);
    base.pair_key = doc.value("pair_key", "");
    base.request_summary = doc.value("request_summary", "");
    base.verdict = doc.value("verdict", "");
    for (const auto& entry : doc.value("unexpected", nlohmann::json::array())) {
      DifferenceRecord record = base;
      record.token.main_token = entry.value("main_token", "");
      record.token.shadow_token = entry.value("shadow_token", "");
      auto kind = context_kind_from_string(entry.value("context_kind", "raw_text"));
      record.token.context.kind = kind.value_or(ContextKind::raw_text);
      record.token.context.locator = entry.value("locator", "");
      records.push_back(std::move(record));
    }
  }
  return records;
}

}  // namespace shadowdiff
