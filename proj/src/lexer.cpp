#include "lexer.hpp"

#include <cctype>
#include <charconv>
#include <map>

namespace vml {

namespace {

const std::map<std::string_view, Tok> kKeywords = {
    {"enum", Tok::KwEnum},       {"number", Tok::KwNumber},
    {"boolean", Tok::KwBoolean}, {"var", Tok::KwVar},
    {"context", Tok::KwContext}, {"varpoint", Tok::KwVarpoint},
    {"property", Tok::KwProperty}, {"rule", Tok::KwRule},
    {"range", Tok::KwRange},     {"precision", Tok::KwPrecision},
    {"unit", Tok::KwUnit},       {"priorities", Tok::KwPriorities},
    {"definitions", Tok::KwDefinitions}, {"maximized", Tok::KwMaximized},
    {"minimized", Tok::KwMinimized},
};

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1;
  int column = 1;

  bool done() const { return pos >= text.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos + ahead < text.size() ? text[pos + ahead] : '\0';
  }
  char advance() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
    return c;
  }
  Span here() const { return {line, column, 0, pos}; }
};

}  // namespace

std::string_view token_name(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer";
    case Tok::Real: return "real";
    case Tok::String: return "string";
    case Tok::KwEnum: return "'enum'";
    case Tok::KwNumber: return "'number'";
    case Tok::KwBoolean: return "'boolean'";
    case Tok::KwVar: return "'var'";
    case Tok::KwContext: return "'context'";
    case Tok::KwVarpoint: return "'varpoint'";
    case Tok::KwProperty: return "'property'";
    case Tok::KwRule: return "'rule'";
    case Tok::KwRange: return "'range'";
    case Tok::KwPrecision: return "'precision'";
    case Tok::KwUnit: return "'unit'";
    case Tok::KwPriorities: return "'priorities'";
    case Tok::KwDefinitions: return "'definitions'";
    case Tok::KwMaximized: return "'maximized'";
    case Tok::KwMinimized: return "'minimized'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Colon: return "':'";
    case Tok::Semicolon: return "';'";
    case Tok::Comma: return "','";
    case Tok::Arrow: return "'=>'";
    case Tok::Eq: return "'='";
    case Tok::Ne: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Amp: return "'&'";
    case Tok::Pipe: return "'|'";
    case Tok::Bang: return "'!'";
    case Tok::End: return "end of input";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text, DiagnosticList& diags) {
  std::vector<Token> tokens;
  Cursor cur{text};

  auto push = [&](Tok kind, Span start, std::string tok_text) {
    start.length = static_cast<int>(cur.pos - start.offset);
    tokens.push_back({kind, start, std::move(tok_text), 0.0});
  };

  while (!cur.done()) {
    char c = cur.peek();

    if (std::isspace(static_cast<unsigned char>(c))) {
      cur.advance();
      continue;
    }

    // block comment
    if (c == '/' && cur.peek(1) == '*') {
      Span start = cur.here();
      cur.advance();
      cur.advance();
      bool closed = false;
      while (!cur.done()) {
        if (cur.peek() == '*' && cur.peek(1) == '/') {
          cur.advance();
          cur.advance();
          closed = true;
          break;
        }
        cur.advance();
      }
      if (!closed) diags.error(start, "unterminated-comment", "unterminated /* comment");
      continue;
    }

    Span start = cur.here();

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (!cur.done() && (std::isalnum(static_cast<unsigned char>(cur.peek())) ||
                             cur.peek() == '_'))
        ident += cur.advance();
      auto kw = kKeywords.find(ident);
      push(kw != kKeywords.end() ? kw->second : Tok::Ident, start, std::move(ident));
      continue;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      bool is_real = false;
      while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek())))
        digits += cur.advance();
      if (cur.peek() == '.' && std::isdigit(static_cast<unsigned char>(cur.peek(1)))) {
        is_real = true;
        digits += cur.advance();
        while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek())))
          digits += cur.advance();
      }
      double value = 0.0;
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
      push(is_real ? Tok::Real : Tok::Int, start, digits);
      tokens.back().number = value;
      continue;
    }

    if (c == '"') {
      cur.advance();
      std::string body;
      bool closed = false;
      while (!cur.done()) {
        char ch = cur.advance();
        if (ch == '"') {
          closed = true;
          break;
        }
        if (ch == '\n') break;
        body += ch;
      }
      if (!closed) diags.error(start, "unterminated-string", "unterminated string literal");
      push(Tok::String, start, std::move(body));
      continue;
    }

    auto two = [&](char second, Tok yes, Tok no) {
      cur.advance();
      if (cur.peek() == second) {
        cur.advance();
        push(yes, start, "");
      } else {
        push(no, start, "");
      }
    };

    switch (c) {
      case '{': cur.advance(); push(Tok::LBrace, start, ""); break;
      case '}': cur.advance(); push(Tok::RBrace, start, ""); break;
      case '[': cur.advance(); push(Tok::LBracket, start, ""); break;
      case ']': cur.advance(); push(Tok::RBracket, start, ""); break;
      case '(': cur.advance(); push(Tok::LParen, start, ""); break;
      case ')': cur.advance(); push(Tok::RParen, start, ""); break;
      case ':': cur.advance(); push(Tok::Colon, start, ""); break;
      case ';': cur.advance(); push(Tok::Semicolon, start, ""); break;
      case ',': cur.advance(); push(Tok::Comma, start, ""); break;
      case '+': cur.advance(); push(Tok::Plus, start, ""); break;
      case '-': cur.advance(); push(Tok::Minus, start, ""); break;
      case '*': cur.advance(); push(Tok::Star, start, ""); break;
      case '/': cur.advance(); push(Tok::Slash, start, ""); break;
      case '&': cur.advance(); push(Tok::Amp, start, ""); break;
      case '|': cur.advance(); push(Tok::Pipe, start, ""); break;
      case '=': two('>', Tok::Arrow, Tok::Eq); break;
      case '<': two('=', Tok::Le, Tok::Lt); break;
      case '>': two('=', Tok::Ge, Tok::Gt); break;
      case '!': two('=', Tok::Ne, Tok::Bang); break;
      default: {
        cur.advance();
        Span sp = start;
        sp.length = 1;
        diags.error(sp, "unknown-character",
                    std::string("unknown character '") + c + "'");
        break;
      }
    }
  }

  Span end = cur.here();
  tokens.push_back({Tok::End, end, "", 0.0});
  return tokens;
}

}  // namespace vml
