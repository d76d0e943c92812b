#include "doctest.h"
#include "helpers.hpp"
#include "printer.hpp"

using namespace vml;

namespace {

void check_roundtrip(const std::string& text, const std::string& name) {
  ParseResult first = parse_model(text, name);
  REQUIRE(!first.diags.has_errors());
  std::string printed = pretty_print(first.model);
  ParseResult second = parse_model(printed, name + "!printed");
  REQUIRE_MESSAGE(!second.diags.has_errors(), printed);
  CHECK_MESSAGE(structurally_equal(first.model, second.model), printed);
}

}  // namespace

TEST_CASE("round-trip over the fixture corpus") {
  for (const char* name : {"listing2.vml", "listing2_verbatim.vml",
                           "listing2_prose.vml", "listing3.vml",
                           "listing3_verbatim.vml"}) {
    CAPTURE(name);
    check_roundtrip(vmltest::read_fixture(name), name);
  }
}

TEST_CASE("round-trip over the grammar's corners") {
  check_roundtrip(
      "boolean flagType;\n"
      "number t { range: [-5,10.5]; precision: 0.25; unit: \"cm\"; }\n"
      "enum e { A; B(7); C; }\n"
      "context c : t;\n"
      "context f : flagType;\n"
      "var g : t = -c * 2 + abs(c - 1) / max(c, 3);\n"
      "varpoint v : t { v >= 2, c > 5 & !(f) => v = 3; }\n"
      "property p : t minimized { priorities: f1(c) = exp(-c/5), f2(c) = c + 1;"
      " definitions: d1(v) = v; }\n"
      "rule r: c > 5 | c < -1 => v = 2;\n",
      "corners");
}

TEST_CASE("defaulted enum codes print without parentheses") {
  ParseResult parsed = parse_model("enum e { A; B; }", "e");
  std::string printed = pretty_print(parsed.model);
  CHECK(printed.find("A;") != std::string::npos);
  CHECK(printed.find("A(") == std::string::npos);
}

TEST_CASE("explicit enum codes are preserved") {
  ParseResult parsed = parse_model("enum e { A(5); B; }", "e");
  std::string printed = pretty_print(parsed.model);
  CHECK(printed.find("A(5)") != std::string::npos);
  ParseResult again = parse_model(printed, "e2");
  CHECK(structurally_equal(parsed.model, again.model));
}

TEST_CASE("expression printing keeps structure under precedence") {
  DiagnosticList diags;
  for (const char* text :
       {"a + b * c", "(a + b) * c", "-(a / b)", "-a / b", "a - (b - c)",
        "!(a < b) & c > 1", "exp(-a / 15) - max(exp(-a / 15))",
        "a < b | c >= d & !e"}) {
    ExprPtr e = parse_expression(text, diags);
    REQUIRE(!diags.has_errors());
    ExprPtr back = parse_expression(print_expr(*e), diags);
    REQUIRE(!diags.has_errors());
    CHECK_MESSAGE(structurally_equal(*e, *back), text, " -> ", print_expr(*e));
  }
}
