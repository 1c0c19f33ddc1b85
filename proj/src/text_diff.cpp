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

#include "text_diff.hpp"

#include <algorithm>
#include <optional>

namespace shadowdiff {

namespace {

enum class Op { Equal, Delete, Insert };

struct Run {
  Op op;
  std::size_t len;
};

// Edit scripts beyond this distance degrade to one coarse token; contexts
// and classification do not benefit from fine structure in texts that are
// mostly unrelated.
constexpr long kMaxEditDistance = 1200;

// Greedy shortest-edit-script search. Returns the reversed run list over
// (a, b), or nullopt when the distance exceeds max_d.
std::optional<std::vector<Run>> myers_runs(std::string_view a, std::string_view b, long max_d) {
  const long n = static_cast<long>(a.size());
  const long m = static_cast<long>(b.size());
  max_d = std::min(max_d, n + m);
  const long offset = max_d + 1;
  std::vector<long> v(static_cast<std::size_t>(2 * max_d + 3), 0);
  std::vector<std::vector<long>> trace;

  long d_final = -1;
  for (long d = 0; d <= max_d; ++d) {
    trace.push_back(v);
    for (long k = -d; k <= d; k += 2) {
      long x;
      if (k == -d || (k != d && v[static_cast<std::size_t>(offset + k - 1)] <
                                    v[static_cast<std::size_t>(offset + k + 1)])) {
        x = v[static_cast<std::size_t>(offset + k + 1)];
      } else {
        x = v[static_cast<std::size_t>(offset + k - 1)] + 1;
      }
      long y = x - k;
      while (x < n && y < m && a[static_cast<std::size_t>(x)] == b[static_cast<std::size_t>(y)]) {
        ++x;
        ++y;
      }
      v[static_cast<std::size_t>(offset + k)] = x;
      if (x >= n && y >= m) {
        d_final = d;
        break;
      }
    }
    if (d_final >= 0) break;
  }
  if (d_final < 0) return std::nullopt;

  // Backtrack from (n, m), emitting runs in reverse order.
  std::vector<Run> reversed;
  auto push = [&reversed](Op op, std::size_t len) {
    if (len == 0) return;
    if (!reversed.empty() && reversed.back().op == op) {
      reversed.back().len += len;
    } else {
      reversed.push_back({op, len});
    }
  };

  long x = n;
  long y = m;
  for (long d = d_final; d > 0; --d) {
    const auto& pv = trace[static_cast<std::size_t>(d)];
    long k = x - y;
    long prev_k;
    if (k == -d || (k != d && pv[static_cast<std::size_t>(offset + k - 1)] <
                                  pv[static_cast<std::size_t>(offset + k + 1)])) {
      prev_k = k + 1;
    } else {
      prev_k = k - 1;
    }
    long prev_x = pv[static_cast<std::size_t>(offset + prev_k)];
    long prev_y = prev_x - prev_k;
    // One vertical/horizontal move from (prev_x, prev_y), then a diagonal
    // snake up to (x, y).
    long mid_x = (prev_k == k + 1) ? prev_x : prev_x + 1;
    push(Op::Equal, static_cast<std::size_t>(x - mid_x));
    if (prev_k == k + 1) {
      push(Op::Insert, 1);
    } else {
      push(Op::Delete, 1);
    }
    x = prev_x;
    y = prev_y;
  }
  push(Op::Equal, static_cast<std::size_t>(x));
  std::reverse(reversed.begin(), reversed.end());
  return reversed;
}

struct PendingChange {
  std::string main_text;
  std::string shadow_text;
  std::size_t main_offset = 0;
  std::size_t shadow_offset = 0;
  bool active = false;
};

std::vector<DiffToken> tokens_from_runs(std::string_view a, std::string_view b,
                                        const std::vector<Run>& runs) {
  std::vector<DiffToken> tokens;
  std::size_t apos = 0;
  std::size_t bpos = 0;
  PendingChange pending;

  auto open_pending = [&](void) {
    if (!pending.active) {
      pending.active = true;
      pending.main_offset = apos;
      pending.shadow_offset = bpos;
      pending.main_text.clear();
      pending.shadow_text.clear();
    }
  };
  auto flush_pending = [&](void) {
    if (pending.active) {
      tokens.push_back({pending.main_text, pending.shadow_text, pending.main_offset,
                        pending.shadow_offset});
      pending.active = false;
    }
  };

  for (const auto& run : runs) {
    switch (run.op) {
      case Op::Equal:
        flush_pending();
        apos += run.len;
        bpos += run.len;
        break;
      case Op::Delete:
        open_pending();
        pending.main_text += a.substr(apos, run.len);
        apos += run.len;
        break;
      case Op::Insert:
        open_pending();
        pending.shadow_text += b.substr(bpos, run.len);
        bpos += run.len;
        break;
    }
  }
  flush_pending();
  return tokens;
}

// Joins tokens separated by short common runs; two halves of one changed
// value otherwise fragment on incidental shared characters.
std::vector<DiffToken> merge_small_gaps(std::string_view a, std::vector<DiffToken> tokens) {
  constexpr std::size_t kMaxGap = 3;
  std::vector<DiffToken> merged;
  for (auto& tok : tokens) {
    if (!merged.empty()) {
      DiffToken& prev = merged.back();
      std::size_t prev_end = prev.main_offset + prev.main_text.size();
      std::size_t gap = tok.main_offset - prev_end;
      std::size_t prev_size = std::max(prev.main_text.size(), prev.shadow_text.size());
      std::size_t tok_size = std::max(tok.main_text.size(), tok.shadow_text.size());
      if (gap <= kMaxGap && gap <= std::max(prev_size, tok_size)) {
        std::string_view gap_text = a.substr(prev_end, gap);
        prev.main_text += std::string(gap_text) + tok.main_text;
        prev.shadow_text += std::string(gap_text) + tok.shadow_text;
        continue;
      }
    }
    merged.push_back(std::move(tok));
  }
  return merged;
}

std::vector<DiffToken> diff_tokens_oriented(std::string_view a, std::string_view b) {
  // Common prefix/suffix never participates in a shortest edit script.
  std::size_t prefix = 0;
  std::size_t limit = std::min(a.size(), b.size());
  while (prefix < limit && a[prefix] == b[prefix]) ++prefix;
  std::size_t suffix = 0;
  while (suffix < limit - prefix && a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) ++suffix;

  std::string_view mid_a = a.substr(prefix, a.size() - prefix - suffix);
  std::string_view mid_b = b.substr(prefix, b.size() - prefix - suffix);

  std::vector<DiffToken> tokens;
  if (mid_a.empty() && mid_b.empty()) return tokens;

  auto runs = myers_runs(mid_a, mid_b, kMaxEditDistance);
  if (!runs) {
    tokens.push_back({std::string(mid_a), std::string(mid_b), prefix, prefix});
    return tokens;
  }
  tokens = tokens_from_runs(mid_a, mid_b, *runs);
  tokens = merge_small_gaps(mid_a, std::move(tokens));
  for (auto& t : tokens) {
    t.main_offset += prefix;
    t.shadow_offset += prefix;
  }
  return tokens;
}

}  // namespace

std::vector<DiffToken> diff_tokens(std::string_view main_text, std::string_view shadow_text) {
  if (main_text == shadow_text) return {};
  // Orient on a canonical input order so that swapping the inputs mirrors
  // the result exactly, independent of tie-breaking inside the search.
  bool swap_inputs = main_text.size() > shadow_text.size() ||
                     (main_text.size() == shadow_text.size() && main_text > shadow_text);
  if (!swap_inputs) return diff_tokens_oriented(main_text, shadow_text);

  std::vector<DiffToken> mirrored = diff_tokens_oriented(shadow_text, main_text);
  for (auto& t : mirrored) {
    std::swap(t.main_text, t.shadow_text);
    std::swap(t.main_offset, t.shadow_offset);
  }
  return mirrored;
}

}  // namespace shadowdiff
