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

#include "text_diff.hpp"

using namespace shadowdiff;

namespace {

// Replays a token list against the main text to rebuild the shadow text;
// validates offsets and reconstruction in one go.
std::string reconstruct_shadow(std::string_view main_text, const std::vector<DiffToken>& tokens) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& tok : tokens) {
    REQUIRE(tok.main_offset >= cursor);
    out += main_text.substr(cursor, tok.main_offset - cursor);
    REQUIRE(main_text.substr(tok.main_offset, tok.main_text.size()) == tok.main_text);
    out += tok.shadow_text;
    cursor = tok.main_offset + tok.main_text.size();
  }
  out += main_text.substr(cursor);
  return out;
}

std::string random_text(std::mt19937_64& rng, std::size_t max_len) {
  static const char alphabet[] = "abcdefg <=>\"/";
  std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
  std::uniform_int_distribution<std::size_t> char_dist(0, sizeof(alphabet) - 2);
  std::string out(len_dist(rng), '\0');
  for (auto& c : out) c = alphabet[char_dist(rng)];
  return out;
}

}  // namespace

TEST_CASE("equal inputs produce no tokens") {
  CHECK(diff_tokens("abc", "abc").empty());
  CHECK(diff_tokens("", "").empty());
}

TEST_CASE("a changed quoted value yields one substitution token") {
  auto tokens = diff_tokens("csrf_token: \"AAA\"", "csrf_token: \"BBB\"");
  REQUIRE(tokens.size() == 1);
  CHECK(tokens[0].main_text == "AAA");
  CHECK(tokens[0].shadow_text == "BBB");
  CHECK(tokens[0].main_offset == 13);
  CHECK(tokens[0].shadow_offset == 13);
}

TEST_CASE("a pure insertion yields one insertion-only token") {
  auto tokens = diff_tokens("<p>x</p>", "<p>x</p><p>y</p>");
  REQUIRE(tokens.size() == 1);
  CHECK(tokens[0].main_text == "");
  CHECK(tokens[0].shadow_text == "<p>y</p>");
  CHECK(tokens[0].main_offset == 8);
}

TEST_CASE("a pure deletion yields one deletion-only token") {
  auto tokens = diff_tokens("head middle tail", "head tail");
  REQUIRE(tokens.size() == 1);
  CHECK(tokens[0].shadow_text == "");
  CHECK(tokens[0].main_text.size() == 7);
}

TEST_CASE("tokens reconstruct the shadow text from the main text") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 300; ++i) {
    std::string a = random_text(rng, 80);
    std::string b = random_text(rng, 80);
    auto tokens = diff_tokens(a, b);
    CHECK(reconstruct_shadow(a, tokens) == b);
    for (const auto& t : tokens) {
      CHECK(!(t.main_text.empty() && t.shadow_text.empty()));
      CHECK(t.main_text != t.shadow_text);
      CHECK(b.substr(t.shadow_offset, t.shadow_text.size()) == t.shadow_text);
    }
  }
}

TEST_CASE("swapping inputs mirrors the token list exactly") {
  std::mt19937_64 rng(202);
  for (int i = 0; i < 300; ++i) {
    std::string a = random_text(rng, 60);
    std::string b = random_text(rng, 60);
    auto forward = diff_tokens(a, b);
    auto backward = diff_tokens(b, a);
    REQUIRE(forward.size() == backward.size());
    for (std::size_t t = 0; t < forward.size(); ++t) {
      CHECK(forward[t].main_text == backward[t].shadow_text);
      CHECK(forward[t].shadow_text == backward[t].main_text);
      CHECK(forward[t].main_offset == backward[t].shadow_offset);
      CHECK(forward[t].shadow_offset == backward[t].main_offset);
    }
  }
}

TEST_CASE("large unrelated inputs degrade to one coarse token") {
  std::mt19937_64 rng(303);
  std::string a(20000, 'x');
  std::string b(20000, 'y');
  for (auto& c : a) c = static_cast<char>('a' + (rng() % 26));
  for (auto& c : b) c = static_cast<char>('A' + (rng() % 26));
  auto tokens = diff_tokens(a, b);
  REQUIRE(tokens.size() == 1);
  CHECK(reconstruct_shadow(a, tokens) == b);
}

TEST_CASE("two random hex tokens collapse into one difference") {
  // incidental shared characters inside the values must not fragment the
  // difference into many slivers
  std::string a = "value=\"b0008cae11221c91b9a8f65d17c33202c819c5fa\"";
  std::string b = "value=\"77e1fc9aa03d3b92c819c5fa11221c91b9a8f651\"";
  auto tokens = diff_tokens(a, b);
  CHECK(tokens.size() <= 3);
  CHECK(reconstruct_shadow(a, tokens) == b);
}
