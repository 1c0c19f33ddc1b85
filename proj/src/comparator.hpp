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
#include <vector>

#include "html_context.hpp"
#include "pairing.hpp"
#include "rules.hpp"

namespace shadowdiff {

inline constexpr std::size_t kNoOffset = static_cast<std::size_t>(-1);

/// One localized divergence between paired responses, with the context used
/// to classify it. Offsets locate the token in the decoded bodies where
/// applicable (text comparisons); kNoOffset otherwise.
struct DifferenceToken {
  std::string main_token;
  std::string shadow_token;
  DifferenceContext context;
  std::size_t main_offset = kNoOffset;
  std::size_t shadow_offset = kNoOffset;
  /// Synthetic tokens (status mismatch, content-type disagreement, missing
  /// response) are never matched against rules.
  bool forced_unexpected = false;

  bool operator==(const DifferenceToken&) const = default;
};

enum class Verdict { equal, expected_only, alarm };

std::string_view to_string(Verdict v);

struct ExpectedDifference {
  DifferenceToken token;
  std::string rule;
};

/// Result of comparing one response pair. verdict==equal iff both lists are
/// empty; alarm iff `unexpected` is non-empty.
struct ComparisonOutcome {
  std::string pair_key;
  std::string request_summary;
  Verdict verdict = Verdict::equal;
  std::vector<ExpectedDifference> expected;
  std::vector<DifferenceToken> unexpected;
  std::vector<std::string> warnings;
};

/// Expected-difference rule matched by this token's context, if any: the
/// first rule (in rule-set order) whose name occurs, case-sensitively, in
/// the context locator. Raw-text contexts never match.
std::optional<std::string> classify(const DifferenceToken& token, const RuleSet& rules);

/// Character-level difference tokens with contexts attached. Pure and
/// symmetric: swapping the inputs swaps main/shadow roles in the output.
std::vector<DifferenceToken> compare_text(std::string_view main_body,
                                          std::string_view shadow_body);

/// Full response-pair comparison: status line, a fixed header subset
/// (Content-Type, Location), then the body by content type — JSON
/// member-wise, textual types by character diff with reordered-attribute
/// suppression, anything else byte-exact. A pair missing one side becomes
/// an alarm.
ComparisonOutcome compare_pair(const ResponsePair& pair, const RuleSet& rules);

}  // namespace shadowdiff
