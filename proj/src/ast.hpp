#ifndef VML_AST_HPP
#define VML_AST_HPP

#include <optional>
#include <string>
#include <vector>

#include "expr.hpp"

namespace vml {

struct TypeDef {
  enum class Kind { Number, Enum, Bool };

  Kind kind = Kind::Number;
  Span span;
  std::string name;

  // number
  double lo = 0.0, hi = 0.0, precision = 1.0;
  bool lo_is_int = false, hi_is_int = false, precision_is_int = false;
  std::optional<std::string> unit_text;

  // enum
  std::vector<EnumType::Literal> literals;
};

enum class VarKind { Context, Varpoint, Property, General };

/// priorities/definitions entry: `name(params) = body`.
struct FunctionDef {
  Span span;
  std::string fname;
  std::vector<std::string> params;
  ExprPtr body;
};

/// `condition => consequence`, or a bare invariant when condition is null.
struct Implication {
  Span span;
  ExprPtr condition;
  ExprPtr consequence;
};

struct VarDef {
  enum class Direction { Unspecified, Minimized, Maximized };

  Span span;
  VarKind kind = VarKind::Context;
  std::string name;
  std::string type_name;  // empty when a general var omits the annotation

  ExprPtr init;                       // general var
  std::vector<Implication> clauses;   // varpoint body
  Direction direction = Direction::Unspecified;
  std::vector<FunctionDef> priorities;
  std::vector<FunctionDef> definitions;
};

struct RuleDef {
  Span span;
  std::string name;
  Implication impl;
};

struct Model {
  std::string source_name;

  // Declaration order is preserved per list and across lists via `order`,
  // which drives pretty-printing and emission order.
  std::vector<TypeDef> types;
  std::vector<VarDef> vars;
  std::vector<RuleDef> rules;

  struct Item {
    enum class Kind { Type, Var, Rule };
    Kind kind;
    std::size_t index;
  };
  std::vector<Item> order;

  std::size_t count_vars(VarKind kind) const {
    std::size_t n = 0;
    for (const auto& v : vars)
      if (v.kind == kind) ++n;
    return n;
  }
};

bool structurally_equal(const Model& a, const Model& b);

}  // namespace vml

#endif
