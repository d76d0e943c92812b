#ifndef VML_LEXER_HPP
#define VML_LEXER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "diagnostics.hpp"

namespace vml {

enum class Tok {
  Ident, Int, Real, String,
  // keywords
  KwEnum, KwNumber, KwBoolean, KwVar, KwContext, KwVarpoint, KwProperty,
  KwRule, KwRange, KwPrecision, KwUnit, KwPriorities, KwDefinitions,
  KwMaximized, KwMinimized,
  // punctuation / operators
  LBrace, RBrace, LBracket, RBracket, LParen, RParen,
  Colon, Semicolon, Comma, Arrow,
  Eq, Ne, Lt, Le, Gt, Ge, Plus, Minus, Star, Slash, Amp, Pipe, Bang,
  End,
};

struct Token {
  Tok kind = Tok::End;
  Span span;
  std::string text;
  double number = 0.0;  // Int/Real
};

std::string_view token_name(Tok kind);

/// Splits source text into tokens. `/* */` comments and whitespace are
/// skipped; unknown characters produce "unknown-character" diagnostics.
/// The trailing End token is always present.
std::vector<Token> tokenize(std::string_view text, DiagnosticList& diags);

}  // namespace vml

#endif
