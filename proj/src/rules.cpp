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

#include "rules.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace shadowdiff {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

void validate_name(const std::string& name, const char* which) {
  if (name.empty()) {
    throw RuleParseError(std::string(which) + " name is empty", 0);
  }
  if (name.find('\n') != std::string::npos || name.find('\r') != std::string::npos) {
    throw RuleParseError(std::string(which) + " name contains a line break", 0);
  }
}

}  // namespace

RuleParseError::RuleParseError(const std::string& message, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

RuleSet::RuleSet(std::vector<std::string> expected, std::vector<std::string> characteristic)
    : expected_(std::move(expected)), characteristic_(std::move(characteristic)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& n : expected_) {
    validate_name(n, "expected-difference");
    if (!seen.insert(n).second) {
      throw RuleParseError("duplicate expected-difference name '" + n + "'", 0);
    }
  }
  seen.clear();
  for (const auto& n : characteristic_) {
    validate_name(n, "characteristic-value");
    if (!seen.insert(n).second) {
      throw RuleParseError("duplicate characteristic-value name '" + n + "'", 0);
    }
  }
}

RuleSet RuleSet::parse(std::string_view text, std::vector<std::string>* warnings) {
  // Strip a UTF-8 byte-order mark if present.
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
    text.remove_prefix(3);
  }

  std::vector<std::string> expected;
  std::vector<std::string> characteristic;
  std::unordered_set<std::string> seen_expected;
  std::unordered_set<std::string> seen_characteristic;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    if (eol == std::string_view::npos && line.empty() && pos == text.size()) break;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::string_view stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') {
      // blank or comment
    } else if (line.front() == ':' || line.front() == '+') {
      const char marker = line.front();
      std::string name(trim(line.substr(1)));
      if (name.empty()) {
        throw RuleParseError("empty name after marker", line_no);
      }
      if (marker == ':') {
        if (!seen_expected.insert(name).second) {
          throw RuleParseError("duplicate expected-difference name '" + name + "'", line_no);
        }
        expected.push_back(std::move(name));
      } else {
        if (!seen_characteristic.insert(name).second) {
          throw RuleParseError("duplicate characteristic-value name '" + name + "'", line_no);
        }
        characteristic.push_back(std::move(name));
      }
    } else {
      throw RuleParseError("expected ':' or '+' marker in column one", line_no);
    }

    if (eol == std::string_view::npos) break;
    pos = eol + 1;
  }

  if (warnings) {
    for (const auto& c : characteristic) {
      if (seen_expected.find(c) == seen_expected.end()) {
        warnings->push_back("characteristic value '" + c +
                            "' is not listed as an expected difference");
      }
    }
  }
  return RuleSet(std::move(expected), std::move(characteristic));
}

RuleSet RuleSet::load_file(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open rule file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), warnings);
}

std::string RuleSet::serialize() const {
  std::string out;
  for (const auto& n : expected_) {
    out += ':';
    out += n;
    out += '\n';
  }
  for (const auto& n : characteristic_) {
    out += '+';
    out += n;
    out += '\n';
  }
  return out;
}

}  // namespace shadowdiff
