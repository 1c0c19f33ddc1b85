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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "encoding.hpp"
#include "support/multipart_oracle.hpp"

using namespace shadowdiff;

TEST_CASE("percent decode handles escapes, plus signs, and junk") {
  CHECK(percent_decode("A%2FB", true) == "A/B");
  CHECK(percent_decode("a+b", true) == "a b");
  CHECK(percent_decode("a+b", false) == "a+b");
  CHECK(percent_decode("100%", true) == "100%");   // dangling escape passes through
  CHECK(percent_decode("%zz", true) == "%zz");     // invalid hex passes through
  CHECK(percent_decode("%41%42", false) == "AB");
}

TEST_CASE("canonical form encoding round-trips through decode") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::uniform_int_distribution<std::size_t> len_dist(0, 64);
    std::string value(len_dist(rng), '\0');
    for (auto& c : value) c = static_cast<char>(rng() & 0xFF);
    CHECK(percent_decode(percent_encode_form(value), true) == value);
  }
}

TEST_CASE("form splitting keeps raw bytes and joins back exactly") {
  auto params = split_form("token=A%2FB&bare&x=1&=v&trail=");
  REQUIRE(params.size() == 5);
  CHECK(params[0].raw_key == "token");
  CHECK(params[0].raw_value == "A%2FB");
  CHECK(!params[1].has_value);
  CHECK(params[3].raw_key == "");
  CHECK(join_form(params) == "token=A%2FB&bare&x=1&=v&trail=");
  CHECK(split_form("").empty());
}

TEST_CASE("cookie headers parse into ordered pairs") {
  auto cookies = parse_cookie_header("sid=abc; theme=dark ;broken; x=1");
  REQUIRE(cookies.size() == 3);
  CHECK(cookies[0] == std::pair<std::string, std::string>{"sid", "abc"});
  CHECK(cookies[1] == std::pair<std::string, std::string>{"theme", "dark"});
  CHECK(cookies[2] == std::pair<std::string, std::string>{"x", "1"});

  auto set_cookie = parse_set_cookie("fxsession=deadbeef; Path=/; HttpOnly");
  REQUIRE(set_cookie.has_value());
  CHECK(set_cookie->first == "fxsession");
  CHECK(set_cookie->second == "deadbeef");
  CHECK(!parse_set_cookie("no-equals-here").has_value());
}

TEST_CASE("multipart boundary extraction") {
  CHECK(multipart_boundary("multipart/form-data; boundary=xyz") == "xyz");
  CHECK(multipart_boundary("multipart/form-data; boundary=\"a b\"; charset=x") == "a b");
  CHECK(!multipart_boundary("text/plain").has_value());
}

namespace {

MultipartBody sample_body() {
  MultipartBody mp;
  MultipartPart text;
  text.headers.emplace_back("Content-Disposition", "form-data; name=\"note\"");
  text.body = "hello there";
  MultipartPart file;
  file.headers.emplace_back("Content-Disposition",
                            "form-data; name=\"doc\"; filename=\"doc.bin\"");
  file.headers.emplace_back("Content-Type", "application/octet-stream");
  file.body = std::string("\x00\x01\xFF\r\n--not-a-boundary\r\n\x7F", 22);
  mp.parts.push_back(std::move(text));
  mp.parts.push_back(std::move(file));
  return mp;
}

}  // namespace

TEST_CASE("multipart encode/decode round-trips, binary bytes exact") {
  MultipartBody mp = sample_body();
  std::string boundary = fresh_boundary(mp);
  std::string encoded = multipart_encode(mp, boundary);

  auto decoded = multipart_decode(encoded, boundary);
  REQUIRE(decoded.has_value());
  REQUIRE(decoded->parts.size() == 2);
  CHECK(decoded->parts[0].body == "hello there");
  CHECK(decoded->parts[0].disposition_param("name") == "note");
  CHECK(decoded->parts[0].is_text());
  CHECK(decoded->parts[1].body == mp.parts[1].body);
  CHECK(decoded->parts[1].disposition_param("filename") == "doc.bin");
  CHECK(!decoded->parts[1].is_text());

  // independent split-based parser agrees
  auto oracle = test_support::decode_multipart_independent(encoded, boundary);
  REQUIRE(oracle.size() == 2);
  CHECK(oracle[1].body == mp.parts[1].body);
}

TEST_CASE("multipart decode survives a preamble and rejects garbage") {
  MultipartBody mp = sample_body();
  std::string boundary = fresh_boundary(mp);
  std::string encoded = "preamble noise\r\n" + multipart_encode(mp, boundary);
  auto decoded = multipart_decode(encoded, boundary);
  REQUIRE(decoded.has_value());
  CHECK(decoded->parts.size() == 2);

  CHECK(!multipart_decode("complete nonsense", boundary).has_value());
  CHECK(!multipart_decode("--" + boundary + "\r\nbroken", boundary).has_value());
}

TEST_CASE("multipart round-trip property over random parts") {
  std::mt19937_64 rng(20260810);
  for (int iteration = 0; iteration < 100; ++iteration) {
    MultipartBody mp;
    std::uniform_int_distribution<int> part_count(1, 5);
    std::uniform_int_distribution<int> body_len(0, 512);
    int parts = part_count(rng);
    for (int p = 0; p < parts; ++p) {
      MultipartPart part;
      bool is_file = (rng() & 1) != 0;
      std::string name = "f" + std::to_string(p);
      if (is_file) {
        part.headers.emplace_back("Content-Disposition",
                                  "form-data; name=\"" + name + "\"; filename=\"x.bin\"");
        part.headers.emplace_back("Content-Type", "application/octet-stream");
        std::string bytes(static_cast<std::size_t>(body_len(rng)), '\0');
        for (auto& c : bytes) c = static_cast<char>(rng() & 0xFF);
        part.body = std::move(bytes);
      } else {
        part.headers.emplace_back("Content-Disposition", "form-data; name=\"" + name + "\"");
        std::string text(static_cast<std::size_t>(body_len(rng)), '\0');
        for (auto& c : text) c = static_cast<char>('a' + (rng() % 26));
        part.body = std::move(text);
      }
      mp.parts.push_back(std::move(part));
    }
    std::string boundary = fresh_boundary(mp);
    auto decoded = multipart_decode(multipart_encode(mp, boundary), boundary);
    REQUIRE(decoded.has_value());
    REQUIRE(decoded->parts.size() == mp.parts.size());
    for (std::size_t p = 0; p < mp.parts.size(); ++p) {
      CHECK(decoded->parts[p].body == mp.parts[p].body);
      CHECK(decoded->parts[p].headers == mp.parts[p].headers);
    }
  }
}

TEST_CASE("fnv1a64 is the reference function") {
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 12638187200555641996ull);
  CHECK(to_hex(0xdeadbeefull) == "00000000deadbeef");
}
