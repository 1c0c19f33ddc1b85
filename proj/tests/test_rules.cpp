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

#include "rules.hpp"

using shadowdiff::RuleParseError;
using shadowdiff::RuleSet;

namespace {

std::vector<std::string> expected_of(const RuleSet& r) { return r.expected_differences(); }
std::vector<std::string> characteristic_of(const RuleSet& r) { return r.characteristic_values(); }

}  // namespace

TEST_CASE("markers classify lines and names keep internal spaces") {
  RuleSet rules = RuleSet::parse(":csrf_token\n:id\n+csrf token");
  CHECK(expected_of(rules) == std::vector<std::string>{"csrf_token", "id"});
  CHECK(characteristic_of(rules) == std::vector<std::string>{"csrf token"});
}

TEST_CASE("empty input parses to an empty rule set") {
  RuleSet rules = RuleSet::parse("");
  CHECK(rules.empty());
  CHECK(rules.serialize() == "");
}

TEST_CASE("whitespace after the marker and around names is trimmed") {
  RuleSet rules = RuleSet::parse(": csrf_token\n: session_info\n+ csrf_token\n");
  CHECK(expected_of(rules) == std::vector<std::string>{"csrf_token", "session_info"});
  CHECK(characteristic_of(rules) == std::vector<std::string>{"csrf_token"});
}

TEST_CASE("comments, blank lines, CRLF, and a BOM are tolerated") {
  std::string text = "\xEF\xBB\xBF# header\r\n\r\n:alpha\r\n  \r\n+alpha\r\n# tail";
  RuleSet rules = RuleSet::parse(text);
  CHECK(expected_of(rules) == std::vector<std::string>{"alpha"});
  CHECK(characteristic_of(rules) == std::vector<std::string>{"alpha"});
}

TEST_CASE("unmarked lines name their line number") {
  try {
    RuleSet::parse(":ok\nbogus line\n");
    FAIL("expected parse error");
  } catch (const RuleParseError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("duplicates and empty names are rejected") {
  CHECK_THROWS_AS(RuleSet::parse(":a\n:a\n"), RuleParseError);
  CHECK_THROWS_AS(RuleSet::parse("+x\n+x\n"), RuleParseError);
  CHECK_THROWS_AS(RuleSet::parse(":\n"), RuleParseError);
  CHECK_THROWS_AS(RuleSet::parse("+   \n"), RuleParseError);
  // same name under both markers is fine
  CHECK_NOTHROW(RuleSet::parse(":a\n+a\n"));
}

TEST_CASE("characteristic value without matching expected difference warns") {
  std::vector<std::string> warnings;
  RuleSet rules = RuleSet::parse("+token\n", &warnings);
  CHECK(characteristic_of(rules) == std::vector<std::string>{"token"});
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("token") != std::string::npos);
}

TEST_CASE("serialization puts ':' lines before '+' lines with no padding") {
  RuleSet rules({"token", "nonce"}, {"token"});
  CHECK(rules.serialize() == ":token\n:nonce\n+token\n");
}

TEST_CASE("the four-line token/item configuration round-trips") {
  RuleSet rules({"RequestVerificationToken", "Items["},
                {"RequestVerificationToken", "Items["});
  std::string text = rules.serialize();
  CHECK(text ==
        ":RequestVerificationToken\n"
        ":Items[\n"
        "+RequestVerificationToken\n"
        "+Items[\n");
  CHECK(RuleSet::parse(text) == rules);
}

TEST_CASE("round-trip holds for random valid rule sets") {
  std::mt19937_64 rng(20260810);
  auto random_name = [&rng]() {
    static const char alphabet[] =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_[]()+-#:@. ";
    std::uniform_int_distribution<std::size_t> len_dist(1, 24);
    std::uniform_int_distribution<std::size_t> char_dist(0, sizeof(alphabet) - 2);
    std::string name;
    std::size_t len = len_dist(rng);
    for (std::size_t i = 0; i < len; ++i) name.push_back(alphabet[char_dist(rng)]);
    return name;
  };

  for (int iteration = 0; iteration < 500; ++iteration) {
    std::vector<std::string> expected;
    std::vector<std::string> characteristic;
    std::uniform_int_distribution<int> count_dist(0, 8);
    int n_expected = count_dist(rng);
    int n_characteristic = count_dist(rng);
    auto add_unique = [](std::vector<std::string>& dst, std::string name) {
      // trimmed, non-empty, unique per set
      std::string_view t = shadowdiff::trim(name);
      if (t.empty()) return;
      std::string cleaned(t);
      for (const auto& existing : dst) {
        if (existing == cleaned) return;
      }
      dst.push_back(std::move(cleaned));
    };
    for (int i = 0; i < n_expected; ++i) add_unique(expected, random_name());
    for (int i = 0; i < n_characteristic; ++i) add_unique(characteristic, random_name());

    RuleSet original(expected, characteristic);
    RuleSet reparsed = RuleSet::parse(original.serialize());
    CHECK(reparsed == original);
  }
}

TEST_CASE("parse is total on arbitrary bytes") {
  std::mt19937_64 rng(42);
  for (int iteration = 0; iteration < 200; ++iteration) {
    std::uniform_int_distribution<std::size_t> len_dist(0, 4096);
    std::string bytes(len_dist(rng), '\0');
    for (auto& c : bytes) c = static_cast<char>(rng() & 0xFF);
    try {
      RuleSet rules = RuleSet::parse(bytes);
      (void)rules;
    } catch (const RuleParseError&) {
      // structured failure is fine; anything else would escape the CHECK
    }
  }
  CHECK(true);
}
