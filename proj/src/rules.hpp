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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shadowdiff {

/// Failure while parsing a rule file. `line()` is 1-based.
class RuleParseError : public std::runtime_error {
 public:
  RuleParseError(const std::string& message, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Immutable rule configuration for a proxy run.
///
/// Expected differences name response regions where the two instances are
/// allowed to diverge (tokens, timestamps, database ids). Characteristic
/// values are the subset of those names whose per-instance values must be
/// tracked and substituted into shadow-bound requests.
///
/// File format, one entry per line:
///   :name      expected difference
///   +name      characteristic value
///   # text     comment
/// The name is everything after the marker with surrounding whitespace
/// trimmed; internal spaces are allowed.
class RuleSet {
 public:
  RuleSet() = default;
  RuleSet(std::vector<std::string> expected, std::vector<std::string> characteristic);

  /// Parses rule-file text. Accumulates non-fatal findings (e.g. a
  /// characteristic value that is not listed as an expected difference)
  /// into `warnings` when given. Throws RuleParseError on malformed input.
  static RuleSet parse(std::string_view text, std::vector<std::string>* warnings = nullptr);

  static RuleSet load_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

  /// Renders the rule file: ':' lines first, then '+' lines, one name per
  /// line, no padding after the marker. parse(serialize()) == *this.
  std::string serialize() const;

  const std::vector<std::string>& expected_differences() const noexcept { return expected_; }
  const std::vector<std::string>& characteristic_values() const noexcept { return characteristic_; }
  bool empty() const noexcept { return expected_.empty() && characteristic_.empty(); }

  bool operator==(const RuleSet&) const = default;

 private:
  std::vector<std::string> expected_;
  std::vector<std::string> characteristic_;
};

/// Trims ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

}  // namespace shadowdiff
