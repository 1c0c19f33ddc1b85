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

#include <string>
#include <vector>

#include "comparator.hpp"

namespace shadowdiff {

/// One unclassified difference as captured in the difference log.
struct DifferenceRecord {
  double time = 0.0;  // unix seconds
  std::string pair_key;
  std::string request_summary;
  std::string verdict;
  DifferenceToken token;
};

/// The operator-facing rendering of one difference:
///   token: <shadow token> found in tag:
///   <enclosing tag text>
/// JSON differences render as `found at path: <path>`; an absent side
/// renders as `<absent>`.
std::string format_special(const DifferenceRecord& record);

/// A rule name proposed from recurring difference contexts.
struct RuleCandidate {
  std::string name;
  std::size_t support = 0;  // distinct pairs exhibiting it
  DifferenceRecord sample;
};

/// Names a difference token could be filed under: attribute names (and the
/// form-control name) for tag contexts, identifiers assigned near the token
/// in script-like content, path segments for JSON contexts, the header name
/// for header contexts. Never derived from the token value itself.
std::vector<std::string> candidate_names(const DifferenceToken& token);

/// Groups records by candidate name, counts support over distinct pairs,
/// and returns candidates meeting `min_support`, highest support first.
/// Candidates are proposals only; nothing is installed automatically.
std::vector<RuleCandidate> suggest_rules(const std::vector<DifferenceRecord>& records,
                                         std::size_t min_support);

/// Candidate list rendered as a rule file, support counts as '#' comment
/// lines. When `base` is given its rules are carried over and candidates
/// already present are not repeated.
std::string render_rule_file(const std::vector<RuleCandidate>& candidates,
                             std::size_t min_support, const RuleSet* base);

// ---------------------------------------------------------------------------
// Shared log-line schema (difference log and alarm log):
// {"time", "pair_key", "request_summary", "verdict",
//  "unexpected": [{"main_token","shadow_token","context_kind","locator"}],
//  "expected": [rule names]}

std::string outcome_to_json_line(const ComparisonOutcome& outcome, double time);

/// Loads a difference log, one record per entry of each line's
/// `unexpected` array.
std::vector<DifferenceRecord> load_difference_log(const std::string& path);

}  // namespace shadowdiff
