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

#include "html_context.hpp"

using namespace shadowdiff;

TEST_CASE("token inside a script block yields the whole script element") {
  std::string body =
      "<html><body>\n"
      "<script type=\"text/javascript\">\n"
      "  var odoo = {\n"
      "    csrf_token: \"b0008cae11221c91b9a8f65d17c33202c819c5fa\",\n"
      "        };\n"
      "</script>\n"
      "</body></html>\n";
  std::size_t at = body.find("b0008cae");
  REQUIRE(at != std::string::npos);
  DifferenceContext ctx = extract_context(body, at, 40);
  CHECK(ctx.kind == ContextKind::html_tag);
  CHECK(ctx.locator.rfind("<script type=\"text/javascript\">", 0) == 0);
  CHECK(ctx.locator.find("csrf_token:") != std::string::npos);
  CHECK(ctx.locator.find("</script>") != std::string::npos);
}

TEST_CASE("body with no markup falls back to a raw-text window") {
  std::string body(200, 'x');
  DifferenceContext ctx = extract_context(body, 100, 5);
  CHECK(ctx.kind == ContextKind::raw_text);
  CHECK(ctx.locator.size() == 64);
}

TEST_CASE("token inside an input tag yields that tag") {
  std::string body =
      "<form action=\"/x\"><input name=\"__RequestVerificationToken\" value=\"XYZZY\"></form>";
  std::size_t at = body.find("XYZZY");
  DifferenceContext ctx = extract_context(body, at, 5);
  CHECK(ctx.kind == ContextKind::html_tag);
  CHECK(ctx.locator ==
        "<input name=\"__RequestVerificationToken\" value=\"XYZZY\">");
}

TEST_CASE("text-node differences get the innermost enclosing open tag") {
  std::string body = "<div class=\"outer\"><p id=\"inner\">some changed text</p></div>";
  std::size_t at = body.find("changed");
  DifferenceContext ctx = extract_context(body, at, 7);
  CHECK(ctx.kind == ContextKind::html_tag);
  CHECK(ctx.locator == "<p id=\"inner\">");
}

TEST_CASE("void elements do not capture following text") {
  std::string body = "<div><br><img src=\"x.png\">trailing words</div>";
  std::size_t at = body.find("words");
  DifferenceContext ctx = extract_context(body, at, 5);
  CHECK(ctx.kind == ContextKind::html_tag);
  CHECK(ctx.locator == "<div>");
}

TEST_CASE("quoted '>' inside attributes does not break tag detection") {
  std::string body = "<a title=\"a>b\" href=\"/x\">link</a>";
  std::size_t at = body.find("/x");
  DifferenceContext ctx = extract_context(body, at, 2);
  CHECK(ctx.kind == ContextKind::html_tag);
  CHECK(ctx.locator == "<a title=\"a>b\" href=\"/x\">");
}

TEST_CASE("malformed markup falls back to raw text instead of failing") {
  std::string body = "<div <notag text here";
  std::size_t at = body.find("text");
  DifferenceContext ctx = extract_context(body, at, 4);
  CHECK(ctx.kind == ContextKind::raw_text);
  CHECK(!ctx.locator.empty());
}

TEST_CASE("raw-text window sits at the end for trailing insertions") {
  std::string body = "short";
  DifferenceContext ctx = extract_context(body, body.size(), 0);
  CHECK(ctx.kind == ContextKind::raw_text);
  CHECK(ctx.locator == "short");
}

TEST_CASE("enclosing_tag reports tag spans only inside tags") {
  std::string body = "<div class=\"x\">text</div>";
  auto span = enclosing_tag(body, body.find("class"));
  REQUIRE(span.has_value());
  CHECK(body.substr(span->begin, span->end - span->begin) == "<div class=\"x\">");
  CHECK(!enclosing_tag(body, body.find("text")).has_value());
}

TEST_CASE("attribute order normalization treats reordered tags as equal") {
  CHECK(tags_equal_normalized("<div class=\"x\" id=\"y\">", "<div id=\"y\" class=\"x\">"));
  CHECK(tags_equal_normalized("<a name=\"v\">", "<a eman=\"v\">"));  // anagram caveat
  CHECK(!tags_equal_normalized("<div class=\"x\">", "<div class=\"z\">"));
}

TEST_CASE("normalization ignores non-alphabetic characters entirely") {
  CHECK(tags_equal_normalized("<p data-n=\"1\">", "<p data-n=\"2\">"));
  CHECK(!tags_equal_normalized("<p data-n=\"a\">", "<p data-n=\"b\">"));
}
