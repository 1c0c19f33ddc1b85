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

#include <json.hpp>

namespace shadowdiff {

/// Parsed with insertion order preserved so order-invariance is genuinely
/// exercised rather than hidden by key-sorting containers.
using OrderedJson = nlohmann::ordered_json;

/// One structural difference between two documents. `path` is the
/// root-to-leaf attribute path ("result.session_info.uid", "items[2].sku");
/// the side missing a member carries an empty text.
struct JsonDiff {
  std::string main_text;
  std::string shadow_text;
  std::string path;

  bool operator==(const JsonDiff&) const = default;
};

/// Recursive member-wise comparison. Object member order is ignored at
/// every depth; array element order is significant; scalars compare by type
/// and value.
std::vector<JsonDiff> compare_json(const OrderedJson& main_doc, const OrderedJson& shadow_doc);

/// Rendering used for diff tokens: strings verbatim (no quotes), everything
/// else in JSON serialization.
std::string json_scalar_text(const OrderedJson& value);

}  // namespace shadowdiff
