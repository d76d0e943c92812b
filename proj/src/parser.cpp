#include "parser.hpp"

#include <string>

#include "lexer.hpp"

namespace vml {

namespace {

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::string source_name, DiagnosticList& diags)
      : toks_(std::move(tokens)), diags_(diags) {
    model_.source_name = std::move(source_name);
  }

  Model take_model() { return std::move(model_); }

  void parse_top_level() {
    while (!at(Tok::End)) {
      switch (peek().kind) {
        case Tok::KwEnum: parse_enum_type(); break;
        case Tok::KwNumber: parse_numeric_type(); break;
        case Tok::KwBoolean: parse_bool_type(); break;
        case Tok::KwContext: parse_context(); break;
        case Tok::KwVar: parse_general_var(); break;
        case Tok::KwVarpoint: parse_varpoint(); break;
        case Tok::KwProperty: parse_property(); break;
        case Tok::KwRule: parse_rule(); break;
        default:
          error_here("expected a type, variable, or rule declaration");
          synchronize();
          break;
      }
    }
  }

  ExprPtr parse_standalone_expression() {
    ExprPtr e = parse_expr();
    if (!at(Tok::End)) error_here("unexpected trailing input after expression");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t idx = i_ + ahead;
    return idx < toks_.size() ? toks_[idx] : toks_.back();
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  const Token& advance() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }
  bool accept(Tok kind) {
    if (!at(kind)) return false;
    advance();
    return true;
  }

  const Token* expect(Tok kind, std::string_view context) {
    if (at(kind)) return &advance();
    diags_.error(peek().span, "syntax",
                 "expected " + std::string(token_name(kind)) + " " +
                     std::string(context) + ", found " +
                     std::string(token_name(peek().kind)));
    return nullptr;
  }

  void error_here(const std::string& message) {
    diags_.error(peek().span, "syntax", message);
  }

  // Skip to just past the next ';' (the statement recovery point), or stop
  // before '}' / end of input.
  void synchronize() {
    while (!at(Tok::End)) {
      if (accept(Tok::Semicolon)) return;
      if (at(Tok::RBrace)) {
        advance();
        return;
      }
      advance();
    }
  }

  void add_type(TypeDef def) {
    model_.order.push_back({Model::Item::Kind::Type, model_.types.size()});
    model_.types.push_back(std::move(def));
  }
  void add_var(VarDef def) {
    model_.order.push_back({Model::Item::Kind::Var, model_.vars.size()});
    model_.vars.push_back(std::move(def));
  }
  void add_rule(RuleDef def) {
    model_.order.push_back({Model::Item::Kind::Rule, model_.rules.size()});
    model_.rules.push_back(std::move(def));
  }

  // -- types ---------------------------------------------------------------

  bool parse_signed_number(double& value, bool& is_int, Span& span) {
    bool neg = false;
    span = peek().span;
    if (accept(Tok::Minus)) neg = true;
    if (!at(Tok::Int) && !at(Tok::Real)) {
      error_here("expected a number");
      return false;
    }
    const Token& t = advance();
    value = neg ? -t.number : t.number;
    is_int = t.kind == Tok::Int;
    return true;
  }

  void parse_numeric_type() {
    TypeDef def;
    def.kind = TypeDef::Kind::Number;
    def.span = peek().span;
    advance();  // number
    if (const Token* name = expect(Tok::Ident, "as type name"))
      def.name = name->text;
    else {
      synchronize();
      return;
    }
    if (!expect(Tok::LBrace, "to open the type body")) { synchronize(); return; }

    if (!expect(Tok::KwRange, "in the type body")) { synchronize(); return; }
    expect(Tok::Colon, "after 'range'");
    Span range_span = peek().span;
    expect(Tok::LBracket, "to open the range");
    if (!parse_signed_number(def.lo, def.lo_is_int, range_span)) { synchronize(); return; }
    expect(Tok::Comma, "between range bounds");
    Span hi_span;
    if (!parse_signed_number(def.hi, def.hi_is_int, hi_span)) { synchronize(); return; }
    expect(Tok::RBracket, "to close the range");
    expect(Tok::Semicolon, "after the range");

    if (!expect(Tok::KwPrecision, "in the type body")) { synchronize(); return; }
    expect(Tok::Colon, "after 'precision'");
    Span prec_span;
    if (!parse_signed_number(def.precision, def.precision_is_int, prec_span)) {
      synchronize();
      return;
    }
    expect(Tok::Semicolon, "after the precision");

    if (accept(Tok::KwUnit)) {
      expect(Tok::Colon, "after 'unit'");
      if (const Token* unit = expect(Tok::String, "as unit name"))
        def.unit_text = unit->text;
      expect(Tok::Semicolon, "after the unit");
    }
    expect(Tok::RBrace, "to close the type body");

    if (def.lo >= def.hi)
      diags_.error(range_span, "empty-range",
                   "range of '" + def.name + "' is empty: lo must be below hi");
    else if (def.precision <= 0.0 || def.precision > def.hi - def.lo)
      diags_.error(prec_span, "invalid-precision",
                   "precision of '" + def.name +
                       "' must be positive and no wider than the range");
    add_type(std::move(def));
  }

  void parse_enum_type() {
    TypeDef def;
    def.kind = TypeDef::Kind::Enum;
    def.span = peek().span;
    advance();  // enum
    if (const Token* name = expect(Tok::Ident, "as type name"))
      def.name = name->text;
    else {
      synchronize();
      return;
    }
    if (!expect(Tok::LBrace, "to open the enum body")) { synchronize(); return; }

    while (at(Tok::Ident)) {
      EnumType::Literal lit;
      lit.name = advance().text;
      if (accept(Tok::LParen)) {
        double code = 0.0;
        bool is_int = true;
        Span sp;
        if (parse_signed_number(code, is_int, sp)) {
          lit.code = static_cast<int>(code);
          lit.explicit_code = true;
          if (!is_int)
            diags_.error(sp, "syntax", "enum literal codes must be integers");
        }
        expect(Tok::RParen, "to close the literal code");
      } else {
        lit.code = static_cast<int>(def.literals.size());
      }
      def.literals.push_back(std::move(lit));
      expect(Tok::Semicolon, "after the enum literal");
    }
    if (def.literals.empty())
      error_here("enum type must declare at least one literal");
    expect(Tok::RBrace, "to close the enum body");
    add_type(std::move(def));
  }

  void parse_bool_type() {
    TypeDef def;
    def.kind = TypeDef::Kind::Bool;
    def.span = peek().span;
    advance();  // boolean
    if (const Token* name = expect(Tok::Ident, "as type name"))
      def.name = name->text;
    expect(Tok::Semicolon, "after the boolean type");
    add_type(std::move(def));
  }

  // -- variables -----------------------------------------------------------

  void parse_context() {
    VarDef def;
    def.kind = VarKind::Context;
    def.span = peek().span;
    advance();  // context
    if (const Token* name = expect(Tok::Ident, "as context name"))
      def.name = name->text;
    else {
      synchronize();
      return;
    }
    expect(Tok::Colon, "after the context name");
    if (const Token* type = expect(Tok::Ident, "as type reference"))
      def.type_name = type->text;
    expect(Tok::Semicolon, "after the context declaration");
    add_var(std::move(def));
  }

  void parse_general_var() {
    VarDef def;
    def.kind = VarKind::General;
    def.span = peek().span;
    advance();  // var
    if (const Token* name = expect(Tok::Ident, "as variable name"))
      def.name = name->text;
    else {
      synchronize();
      return;
    }
    // The type annotation is optional; the analyzer infers it when absent.
    if (accept(Tok::Colon)) {
      if (const Token* type = expect(Tok::Ident, "as type reference"))
        def.type_name = type->text;
    }
    if (!expect(Tok::Eq, "before the variable definition")) {
      synchronize();
      return;
    }
    def.init = parse_expr();
    expect(Tok::Semicolon, "after the variable definition");
    add_var(std::move(def));
  }

  void parse_varpoint() {
    VarDef def;
    def.kind = VarKind::Varpoint;
    def.span = peek().span;
    advance();  // varpoint
    if (const Token* name = expect(Tok::Ident, "as variation point name"))
      def.name = name->text;
    else {
      synchronize();
      return;
    }
    expect(Tok::Colon, "after the variation point name");
    if (const Token* type = expect(Tok::Ident, "as type reference"))
      def.type_name = type->text;

    if (accept(Tok::LBrace)) {
      // '{' clause (',' clause)* ';' '}'
      do {
        Implication clause;
        clause.span = peek().span;
        ExprPtr first = parse_expr();
        if (accept(Tok::Arrow)) {
          clause.condition = std::move(first);
          clause.consequence = parse_expr();
        } else {
          clause.consequence = std::move(first);
        }
        def.clauses.push_back(std::move(clause));
      } while (accept(Tok::Comma));
      expect(Tok::Semicolon, "after the variation point constraints");
      expect(Tok::RBrace, "to close the variation point body");
    } else {
      expect(Tok::Semicolon, "after the variation point declaration");
    }
    add_var(std::move(def));
  }

  void parse_property() {
    VarDef def;
    def.kind = VarKind::Property;
    def.span = peek().span;
    advance();  // property
    if (const Token* name = expect(Tok::Ident, "as property name"))
      def.name = name->text;
    else {
      synchronize();
      return;
    }
    expect(Tok::Colon, "after the property name");
    if (const Token* type = expect(Tok::Ident, "as type reference"))
      def.type_name = type->text;
    if (accept(Tok::KwMaximized)) def.direction = VarDef::Direction::Maximized;
    else if (accept(Tok::KwMinimized)) def.direction = VarDef::Direction::Minimized;

    if (!expect(Tok::LBrace, "to open the property body")) {
      synchronize();
      return;
    }
    if (expect(Tok::KwPriorities, "in the property body")) {
      expect(Tok::Colon, "after 'priorities'");
      do {
        def.priorities.push_back(parse_function_def());
      } while (accept(Tok::Comma));
      expect(Tok::Semicolon, "after the priority functions");
    }
    if (expect(Tok::KwDefinitions, "in the property body")) {
      expect(Tok::Colon, "after 'definitions'");
      do {
        def.definitions.push_back(parse_function_def());
      } while (accept(Tok::Comma));
      expect(Tok::Semicolon, "after the definition functions");
    }
    expect(Tok::RBrace, "to close the property body");
    add_var(std::move(def));
  }

  FunctionDef parse_function_def() {
    FunctionDef fn;
    fn.span = peek().span;
    if (const Token* name = expect(Tok::Ident, "as function name"))
      fn.fname = name->text;
    expect(Tok::LParen, "to open the parameter list");
    do {
      if (const Token* param = expect(Tok::Ident, "as function parameter"))
        fn.params.push_back(param->text);
    } while (accept(Tok::Comma));
    expect(Tok::RParen, "to close the parameter list");
    expect(Tok::Eq, "before the function body");
    fn.body = parse_expr();
    return fn;
  }

  void parse_rule() {
    RuleDef def;
    def.span = peek().span;
    advance();  // rule
    if (const Token* name = expect(Tok::Ident, "as rule name"))
      def.name = name->text;
    else {
      synchronize();
      return;
    }
    expect(Tok::Colon, "after the rule name");
    def.impl.span = peek().span;
    def.impl.condition = parse_expr();
    if (!expect(Tok::Arrow, "between rule condition and consequence")) {
      synchronize();
      return;
    }
    def.impl.consequence = parse_expr();
    expect(Tok::Semicolon, "after the rule");
    add_rule(std::move(def));
  }

  // -- expressions ---------------------------------------------------------
  // Precedence, loosest first: |  &  !  comparisons  + -  * /  unary -  atoms

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at(Tok::Pipe)) {
      Span sp = advance().span;
      lhs = Expr::make_binary(BinaryOp::Or, std::move(lhs), parse_and(), sp);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (at(Tok::Amp)) {
      Span sp = advance().span;
      lhs = Expr::make_binary(BinaryOp::And, std::move(lhs), parse_not(), sp);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (at(Tok::Bang)) {
      Span sp = advance().span;
      return Expr::make_unary(UnaryOp::Not, parse_not(), sp);
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_additive();
    BinaryOp op;
    switch (peek().kind) {
      case Tok::Lt: op = BinaryOp::Lt; break;
      case Tok::Le: op = BinaryOp::Le; break;
      case Tok::Gt: op = BinaryOp::Gt; break;
      case Tok::Ge: op = BinaryOp::Ge; break;
      case Tok::Eq: op = BinaryOp::Eq; break;
      case Tok::Ne: op = BinaryOp::Ne; break;
      default: return lhs;
    }
    Span sp = advance().span;
    return Expr::make_binary(op, std::move(lhs), parse_additive(), sp);
  }

  ExprPtr parse_additive() {
    ExprPtr lhs = parse_multiplicative();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinaryOp op = at(Tok::Plus) ? BinaryOp::Add : BinaryOp::Sub;
      Span sp = advance().span;
      lhs = Expr::make_binary(op, std::move(lhs), parse_multiplicative(), sp);
    }
    return lhs;
  }

  ExprPtr parse_multiplicative() {
    ExprPtr lhs = parse_unary();
    while (at(Tok::Star) || at(Tok::Slash)) {
      BinaryOp op = at(Tok::Star) ? BinaryOp::Mul : BinaryOp::Div;
      Span sp = advance().span;
      lhs = Expr::make_binary(op, std::move(lhs), parse_unary(), sp);
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at(Tok::Minus)) {
      Span sp = advance().span;
      return Expr::make_unary(UnaryOp::Neg, parse_unary(), sp);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int:
      case Tok::Real: {
        advance();
        return Expr::make_number(t.number, t.kind == Tok::Int, t.span);
      }
      case Tok::LParen: {
        advance();
        ExprPtr inner = parse_expr();
        expect(Tok::RParen, "to close the parenthesized expression");
        return inner;
      }
      case Tok::Ident: {
        advance();
        if (!at(Tok::LParen)) return Expr::make_var(t.text, t.span);

        advance();  // (
        std::vector<ExprPtr> args;
        if (!at(Tok::RParen)) {
          do {
            args.push_back(parse_expr());
          } while (accept(Tok::Comma));
        }
        expect(Tok::RParen, "to close the call");

        Builtin fn;
        if (t.text == "exp") fn = Builtin::Exp;
        else if (t.text == "abs") fn = Builtin::Abs;
        else if (t.text == "min") fn = Builtin::Min;
        else if (t.text == "max") fn = Builtin::Max;
        else {
          diags_.error(t.span, "unknown-function",
                       "unknown function '" + t.text + "' (supported: exp, abs, min, max)");
          return Expr::make_number(0.0, true, t.span);
        }
        std::size_t want_min = (fn == Builtin::Min || fn == Builtin::Max) ? 1 : 1;
        std::size_t want_max = (fn == Builtin::Min || fn == Builtin::Max) ? 2 : 1;
        if (args.size() < want_min || args.size() > want_max) {
          diags_.error(t.span, "bad-arity",
                       "'" + t.text + "' expects " +
                           (want_min == want_max
                                ? std::to_string(want_min)
                                : std::to_string(want_min) + " or " + std::to_string(want_max)) +
                           " argument(s)");
          return Expr::make_number(0.0, true, t.span);
        }
        return Expr::make_call(fn, std::move(args), t.span);
      }
      default:
        error_here("expected an expression, found " + std::string(token_name(t.kind)));
        advance();
        return Expr::make_number(0.0, true, t.span);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  DiagnosticList& diags_;
  Model model_;
};

}  // namespace

ParseResult parse_model(std::string_view text, std::string source_name) {
  ParseResult result;
  auto tokens = tokenize(text, result.diags);
  Parser parser(std::move(tokens), std::move(source_name), result.diags);
  parser.parse_top_level();
  result.model = parser.take_model();
  return result;
}

ExprPtr parse_expression(std::string_view text, DiagnosticList& diags) {
  auto tokens = tokenize(text, diags);
  Parser parser(std::move(tokens), "<expression>", diags);
  return parser.parse_standalone_expression();
}

}  // namespace vml
