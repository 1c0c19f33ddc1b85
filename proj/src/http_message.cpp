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

#include "http_message.hpp"

#include "encoding.hpp"
#include "rules.hpp"

namespace shadowdiff {

namespace {

std::string first_header(const HeaderList& headers, std::string_view name) {
  for (const auto& [k, v] : headers) {
    if (iequals(k, name)) return v;
  }
  return "";
}

bool contains_header(const HeaderList& headers, std::string_view name) {
  for (const auto& [k, v] : headers) {
    if (iequals(k, name)) return true;
  }
  return false;
}

}  // namespace

std::string parse_media_type(std::string_view content_type) {
  std::size_t semi = content_type.find(';');
  if (semi != std::string_view::npos) content_type = content_type.substr(0, semi);
  return to_lower(trim(content_type));
}

std::string HttpResponse::header(std::string_view name) const {
  return first_header(headers, name);
}

std::vector<std::string> HttpResponse::header_values(std::string_view name) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : headers) {
    if (iequals(k, name)) out.push_back(v);
  }
  return out;
}

bool HttpResponse::has_header(std::string_view name) const {
  return contains_header(headers, name);
}

std::string HttpResponse::media_type() const {
  return parse_media_type(header("Content-Type"));
}

std::string HttpRequest::path() const {
  std::size_t q = target.find('?');
  return q == std::string::npos ? target : target.substr(0, q);
}

std::string HttpRequest::query() const {
  std::size_t q = target.find('?');
  return q == std::string::npos ? "" : target.substr(q + 1);
}

std::string HttpRequest::header(std::string_view name) const {
  return first_header(headers, name);
}

bool HttpRequest::has_header(std::string_view name) const {
  return contains_header(headers, name);
}

void HttpRequest::set_header(std::string_view name, std::string_view value) {
  remove_header(name);
  headers.emplace_back(std::string(name), std::string(value));
}

void HttpRequest::remove_header(std::string_view name) {
  std::erase_if(headers, [&](const auto& h) { return iequals(h.first, name); });
}

std::string HttpRequest::media_type() const {
  return parse_media_type(header("Content-Type"));
}

std::string HttpRequest::summary() const {
  return method + " " + target;
}

MediaClass classify_media(std::string_view media_type) {
  if (media_type.empty()) return MediaClass::none;
  std::string mt(media_type);
  if (mt.find("json") != std::string::npos) return MediaClass::json;  // includes +json suffixes
  if (mt.rfind("text/", 0) == 0) return MediaClass::text;
  if (mt == "application/javascript" || mt == "application/ecmascript" ||
      mt == "application/x-www-form-urlencoded" || mt == "application/xml" ||
      (mt.size() >= 4 && mt.compare(mt.size() - 4, 4, "+xml") == 0)) {
    return MediaClass::text;
  }
  return MediaClass::binary;
}

}  // namespace shadowdiff
