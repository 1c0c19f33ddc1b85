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
#include <string>
#include <string_view>
#include <vector>

namespace shadowdiff {

/// One localized divergence between two texts. Maximal runs of
/// deleted/inserted characters between common regions are coalesced into a
/// single token; an insertion-only token has empty `main_text`, a
/// deletion-only token empty `shadow_text`. Offsets are byte positions of
/// the token in the respective input (for an empty side, the position where
/// the other side's text would be spliced in).
struct DiffToken {
  std::string main_text;
  std::string shadow_text;
  std::size_t main_offset = 0;
  std::size_t shadow_offset = 0;

  bool operator==(const DiffToken&) const = default;
};

/// Character-level difference tokens between two texts.
///
/// Properties: equal inputs yield an empty list; swapping the inputs yields
/// the same list with main/shadow roles mirrored; concatenating the common
/// regions with either side of the tokens reconstructs that input.
std::vector<DiffToken> diff_tokens(std::string_view main_text, std::string_view shadow_text);

}  // namespace shadowdiff
