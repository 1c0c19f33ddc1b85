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

#include "json_compare.hpp"

namespace shadowdiff {

namespace {

enum class TypeClass { null, boolean, number, string, array, object };

TypeClass type_class(const OrderedJson& v) {
  if (v.is_null()) return TypeClass::null;
  if (v.is_boolean()) return TypeClass::boolean;
  if (v.is_number()) return TypeClass::number;
  if (v.is_string()) return TypeClass::string;
  if (v.is_array()) return TypeClass::array;
  return TypeClass::object;
}

std::string child_path(const std::string& base, const std::string& key) {
  if (base.empty()) return key;
  return base + "." + key;
}

std::string index_path(const std::string& base, std::size_t i) {
  return (base.empty() ? std::string("$") : base) + "[" + std::to_string(i) + "]";
}

void walk(const OrderedJson& main_v, const OrderedJson& shadow_v, const std::string& path,
          std::vector<JsonDiff>& out) {
  TypeClass tm = type_class(main_v);
  TypeClass ts = type_class(shadow_v);
  if (tm != ts) {
    out.push_back({json_scalar_text(main_v), json_scalar_text(shadow_v),
                   path.empty() ? "$" : path});
    return;
  }
  switch (tm) {
    case TypeClass::object: {
      for (auto it = main_v.begin(); it != main_v.end(); ++it) {
        auto other = shadow_v.find(it.key());
        if (other == shadow_v.end()) {
          out.push_back({json_scalar_text(it.value()), "", child_path(path, it.key())});
        } else {
          walk(it.value(), other.value(), child_path(path, it.key()), out);
        }
      }
      for (auto it = shadow_v.begin(); it != shadow_v.end(); ++it) {
        if (main_v.find(it.key()) == main_v.end()) {
          out.push_back({"", json_scalar_text(it.value()), child_path(path, it.key())});
        }
      }
      break;
    }
    case TypeClass::array: {
      std::size_t common = std::min(main_v.size(), shadow_v.size());
      for (std::size_t i = 0; i < common; ++i) {
        walk(main_v[i], shadow_v[i], index_path(path, i), out);
      }
      for (std::size_t i = common; i < main_v.size(); ++i) {
        out.push_back({json_scalar_text(main_v[i]), "", index_path(path, i)});
      }
      for (std::size_t i = common; i < shadow_v.size(); ++i) {
        out.push_back({"", json_scalar_text(shadow_v[i]), index_path(path, i)});
      }
      break;
    }
    default: {
      if (main_v != shadow_v) {
        out.push_back({json_scalar_text(main_v), json_scalar_text(shadow_v),
                       path.empty() ? "$" : path});
      }
      break;
    }
  }
}

}  // namespace

std::string json_scalar_text(const OrderedJson& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

std::vector<JsonDiff> compare_json(const OrderedJson& main_doc, const OrderedJson& shadow_doc) {
  std::vector<JsonDiff> out;
  walk(main_doc, shadow_doc, "", out);
  return out;
}

}  // namespace shadowdiff
