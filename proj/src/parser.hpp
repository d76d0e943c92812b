#ifndef VML_PARSER_HPP
#define VML_PARSER_HPP

#include <string>
#include <string_view>

#include "ast.hpp"
#include "diagnostics.hpp"

namespace vml {

struct ParseResult {
  Model model;
  DiagnosticList diags;
};

/// Parses a model per the language grammar. Syntax errors are reported
/// with expected/found token names; parsing recovers at the next ';' so
/// several errors can be reported in one run.
ParseResult parse_model(std::string_view text, std::string source_name);

/// Parses a standalone expression (used for subscription predicates).
ExprPtr parse_expression(std::string_view text, DiagnosticList& diags);

}  // namespace vml

#endif
