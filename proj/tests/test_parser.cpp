#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "lexer.hpp"

using namespace vml;

TEST_CASE("tokenize a context declaration") {
  DiagnosticList diags;
  auto tokens = tokenize("context ctx_battery : percentType;", diags);
  REQUIRE(diags.empty());
  std::vector<Tok> kinds;
  for (const auto& t : tokens) kinds.push_back(t.kind);
  CHECK(kinds == std::vector<Tok>{Tok::KwContext, Tok::Ident, Tok::Colon, Tok::Ident,
                                  Tok::Semicolon, Tok::End});
  CHECK(tokens[1].text == "ctx_battery");
}

TEST_CASE("tokenize empty input") {
  DiagnosticList diags;
  auto tokens = tokenize("", diags);
  REQUIRE(tokens.size() == 1);
  CHECK(tokens[0].kind == Tok::End);
  CHECK(diags.empty());
}

TEST_CASE("tokenize a range clause") {
  DiagnosticList diags;
  auto tokens = tokenize("range: [5,100];", diags);
  std::vector<Tok> kinds;
  for (const auto& t : tokens) kinds.push_back(t.kind);
  CHECK(kinds == std::vector<Tok>{Tok::KwRange, Tok::Colon, Tok::LBracket, Tok::Int,
                                  Tok::Comma, Tok::Int, Tok::RBracket, Tok::Semicolon,
                                  Tok::End});
  CHECK(tokens[3].number == 5.0);
  CHECK(tokens[5].number == 100.0);
}

TEST_CASE("unknown characters are reported with spans") {
  DiagnosticList diags;
  tokenize("context $x;", diags);
  REQUIRE(diags.count("unknown-character") == 1);
  CHECK(diags.items()[0].span.line == 1);
  CHECK(diags.items()[0].span.column == 9);
}

TEST_CASE("comments and arrows") {
  DiagnosticList diags;
  auto tokens = tokenize("/* skipped\n lines */ a => b != c", diags);
  REQUIRE(diags.empty());
  CHECK(tokens[0].kind == Tok::Ident);
  CHECK(tokens[1].kind == Tok::Arrow);
  CHECK(tokens[3].kind == Tok::Ne);
  CHECK(tokens[0].span.line == 2);  // after the comment's newline
}

TEST_CASE("parse the velocity model fixture") {
  ParseResult result = vmltest::parse_fixture("listing3.vml");
  REQUIRE(!result.diags.has_errors());
  const Model& m = result.model;
  CHECK(m.types.size() == 2);
  CHECK(m.count_vars(VarKind::Context) == 2);
  CHECK(m.rules.size() == 3);
  CHECK(m.count_vars(VarKind::Property) == 2);
  CHECK(m.count_vars(VarKind::Varpoint) == 2);
}

TEST_CASE("parse the coffee model fixture") {
  ParseResult result = vmltest::parse_fixture("listing2.vml");
  REQUIRE(!result.diags.has_errors());
  const Model& m = result.model;
  CHECK(m.types.size() == 5);
  std::size_t enums = 0;
  for (const auto& t : m.types)
    if (t.kind == TypeDef::Kind::Enum) ++enums;
  CHECK(enums == 1);
  CHECK(m.count_vars(VarKind::Context) == 6);
  CHECK(m.count_vars(VarKind::General) == 2);
  CHECK(m.rules.size() == 4);
  CHECK(m.count_vars(VarKind::Varpoint) == 1);
}

TEST_CASE("empty ranges are rejected") {
  ParseResult result = parse_model("number t { range: [1,0]; precision: 1; }", "t");
  CHECK(result.diags.count("empty-range") == 1);
}

TEST_CASE("precision wider than the range is rejected") {
  ParseResult result = parse_model("number t { range: [0,1]; precision: 2; }", "t");
  CHECK(result.diags.count("invalid-precision") == 1);
}

TEST_CASE("parsing recovers at semicolons and reports several errors") {
  ParseResult result = parse_model(
      "context a : ;\n"
      "context b : t;\n"
      "rule r: x 3 => y = 1;\n"
      "context c : t;\n",
      "multi");
  CHECK(result.diags.error_count() >= 2);
  // recovery kept the well-formed declarations
  CHECK(result.model.count_vars(VarKind::Context) >= 2);
}

TEST_CASE("token spans cover all non-whitespace non-comment input") {
  std::string text = vmltest::read_fixture("listing3.vml");
  DiagnosticList diags;
  auto tokens = tokenize(text, diags);
  REQUIRE(diags.empty());

  std::vector<char> covered(text.size(), 0);
  for (const auto& t : tokens)
    for (int i = 0; i < t.span.length; ++i) covered[t.span.offset + i] = 1;

  // independent comment/whitespace scan
  bool in_comment = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (in_comment) {
      if (text[i] == '*' && i + 1 < text.size() && text[i + 1] == '/') {
        in_comment = false;
        ++i;
      }
      continue;
    }
    if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      in_comment = true;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(text[i]))) continue;
    CHECK(covered[i] == 1);
  }
}

TEST_CASE("parsing is deterministic") {
  std::string text = vmltest::read_fixture("listing2.vml");
  ParseResult a = parse_model(text, "x");
  ParseResult b = parse_model(text, "x");
  CHECK(structurally_equal(a.model, b.model));
  CHECK(a.diags.items().size() == b.diags.items().size());
}

TEST_CASE("string values in scenario of grammar: unit strings") {
  ParseResult result = parse_model(
      "number d { range: [0,20]; precision: 0.1; unit: \"m\"; }", "u");
  REQUIRE(!result.diags.has_errors());
  REQUIRE(result.model.types.size() == 1);
  CHECK(result.model.types[0].unit_text == "m");
}

TEST_CASE("varpoint bodies parse invariants and implications") {
  ParseResult result = parse_model(
      "number t { range: [0,10]; precision: 1; }\n"
      "context c : t;\n"
      "varpoint v : t { v >= 2, c > 5 => v = 3; }\n",
      "vp");
  REQUIRE(!result.diags.has_errors());
  const VarDef* vp = nullptr;
  for (const auto& var : result.model.vars)
    if (var.kind == VarKind::Varpoint) vp = &var;
  REQUIRE(vp);
  REQUIRE(vp->clauses.size() == 2);
  CHECK(vp->clauses[0].condition == nullptr);
  CHECK(vp->clauses[1].condition != nullptr);
}

TEST_CASE("enum literals accept explicit codes") {
  ParseResult result = parse_model("enum e { A(5); B; C(9); }", "e");
  REQUIRE(!result.diags.has_errors());
  const auto& lits = result.model.types[0].literals;
  REQUIRE(lits.size() == 3);
  CHECK(lits[0].code == 5);
  CHECK(lits[0].explicit_code);
  CHECK(lits[1].code == 1);  // 0-based position
  CHECK(!lits[1].explicit_code);
  CHECK(lits[2].code == 9);
}
