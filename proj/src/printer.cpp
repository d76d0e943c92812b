#include "printer.hpp"

#include <cmath>
#include <sstream>

#include "types.hpp"

namespace vml {

namespace {

std::string print_number(double value, bool is_int) {
  if (is_int && value == std::floor(value) && std::fabs(value) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", value);
    return buf;
  }
  std::string s = format_double(value);
  // Keep reals lexically real so the round-trip preserves the token kind.
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
  return s;
}

// Binding strength used to decide where parentheses are required.
int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Binary:
      switch (e.bop) {
        case BinaryOp::Or: return 1;
        case BinaryOp::And: return 2;
        default:
          return is_comparison(e.bop) ? 4 : (e.bop == BinaryOp::Add || e.bop == BinaryOp::Sub ? 5 : 6);
      }
    case Expr::Kind::Unary:
      return e.uop == UnaryOp::Not ? 3 : 7;
    default:
      return 8;
  }
}

void print_into(const Expr& e, std::ostream& out, int parent_prec) {
  int prec = precedence(e);
  bool parens = prec < parent_prec;
  if (parens) out << '(';

  switch (e.kind) {
    case Expr::Kind::Number:
      out << print_number(e.number, e.number_is_int);
      break;
    case Expr::Kind::VarRef:
      out << e.name;
      break;
    case Expr::Kind::Unary:
      out << (e.uop == UnaryOp::Neg ? "-" : "!");
      print_into(*e.args[0], out, prec + 1);
      break;
    case Expr::Kind::Binary: {
      print_into(*e.args[0], out, prec);
      out << ' ' << binary_op_text(e.bop) << ' ';
      // Right operand needs one more level: operators are left-associative
      // and comparisons do not chain.
      print_into(*e.args[1], out, prec + 1);
      break;
    }
    case Expr::Kind::Call: {
      switch (e.builtin) {
        case Builtin::Exp: out << "exp"; break;
        case Builtin::Abs: out << "abs"; break;
        case Builtin::Min: out << "min"; break;
        case Builtin::Max: out << "max"; break;
      }
      out << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out << ", ";
        print_into(*e.args[i], out, 0);
      }
      out << ')';
      break;
    }
  }
  if (parens) out << ')';
}

void print_function(const FunctionDef& fn, std::ostream& out) {
  out << fn.fname << '(';
  for (std::size_t i = 0; i < fn.params.size(); ++i) {
    if (i) out << ", ";
    out << fn.params[i];
  }
  out << ") = " << print_expr(*fn.body);
}

void print_clause(const Implication& clause, std::ostream& out) {
  if (clause.condition) {
    out << print_expr(*clause.condition) << " => ";
  }
  out << print_expr(*clause.consequence);
}

void print_type(const TypeDef& type, std::ostream& out) {
  switch (type.kind) {
    case TypeDef::Kind::Number:
      out << "number " << type.name << " { range: ["
          << print_number(type.lo, type.lo_is_int) << ','
          << print_number(type.hi, type.hi_is_int) << "]; precision: "
          << print_number(type.precision, type.precision_is_int) << ';';
      if (type.unit_text) out << " unit: \"" << *type.unit_text << "\";";
      out << " }\n";
      break;
    case TypeDef::Kind::Enum: {
      out << "enum " << type.name << " { ";
      for (const auto& lit : type.literals) {
        out << lit.name;
        if (lit.explicit_code) out << '(' << lit.code << ')';
        out << "; ";
      }
      out << "}\n";
      break;
    }
    case TypeDef::Kind::Bool:
      out << "boolean " << type.name << ";\n";
      break;
  }
}

void print_var(const VarDef& var, std::ostream& out) {
  switch (var.kind) {
    case VarKind::Context:
      out << "context " << var.name << " : " << var.type_name << ";\n";
      break;
    case VarKind::General:
      out << "var " << var.name;
      if (!var.type_name.empty()) out << " : " << var.type_name;
      out << " = " << print_expr(*var.init) << ";\n";
      break;
    case VarKind::Varpoint:
      out << "varpoint " << var.name << " : " << var.type_name;
      if (var.clauses.empty()) {
        out << ";\n";
      } else {
        out << " { ";
        for (std::size_t i = 0; i < var.clauses.size(); ++i) {
          if (i) out << ", ";
          print_clause(var.clauses[i], out);
        }
        out << "; }\n";
      }
      break;
    case VarKind::Property: {
      out << "property " << var.name << " : " << var.type_name;
      if (var.direction == VarDef::Direction::Maximized) out << " maximized";
      if (var.direction == VarDef::Direction::Minimized) out << " minimized";
      out << " {\n  priorities: ";
      for (std::size_t i = 0; i < var.priorities.size(); ++i) {
        if (i) out << ",\n    ";
        print_function(var.priorities[i], out);
      }
      out << ";\n  definitions: ";
      for (std::size_t i = 0; i < var.definitions.size(); ++i) {
        if (i) out << ",\n    ";
        print_function(var.definitions[i], out);
      }
      out << ";\n}\n";
      break;
    }
  }
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream out;
  print_into(e, out, 0);
  return out.str();
}

std::string pretty_print(const Model& model) {
  std::ostringstream out;
  for (const auto& item : model.order) {
    switch (item.kind) {
      case Model::Item::Kind::Type:
        print_type(model.types[item.index], out);
        break;
      case Model::Item::Kind::Var:
        print_var(model.vars[item.index], out);
        break;
      case Model::Item::Kind::Rule: {
        const RuleDef& rule = model.rules[item.index];
        out << "rule " << rule.name << ": ";
        print_clause(rule.impl, out);
        out << ";\n";
        break;
      }
    }
  }
  return out.str();
}

namespace {

bool equal_functions(const std::vector<FunctionDef>& a, const std::vector<FunctionDef>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].fname != b[i].fname || a[i].params != b[i].params) return false;
    if (!structurally_equal(*a[i].body, *b[i].body)) return false;
  }
  return true;
}

bool equal_clause(const Implication& a, const Implication& b) {
  if ((a.condition != nullptr) != (b.condition != nullptr)) return false;
  if (a.condition && !structurally_equal(*a.condition, *b.condition)) return false;
  return structurally_equal(*a.consequence, *b.consequence);
}

}  // namespace

bool structurally_equal(const Model& a, const Model& b) {
  if (a.types.size() != b.types.size() || a.vars.size() != b.vars.size() ||
      a.rules.size() != b.rules.size() || a.order.size() != b.order.size())
    return false;

  for (std::size_t i = 0; i < a.order.size(); ++i)
    if (a.order[i].kind != b.order[i].kind || a.order[i].index != b.order[i].index)
      return false;

  for (std::size_t i = 0; i < a.types.size(); ++i) {
    const TypeDef& x = a.types[i];
    const TypeDef& y = b.types[i];
    if (x.kind != y.kind || x.name != y.name) return false;
    if (x.kind == TypeDef::Kind::Number) {
      if (x.lo != y.lo || x.hi != y.hi || x.precision != y.precision) return false;
      if (x.unit_text != y.unit_text) return false;
    }
    if (x.kind == TypeDef::Kind::Enum) {
      if (x.literals.size() != y.literals.size()) return false;
      for (std::size_t j = 0; j < x.literals.size(); ++j) {
        if (x.literals[j].name != y.literals[j].name ||
            x.literals[j].code != y.literals[j].code ||
            x.literals[j].explicit_code != y.literals[j].explicit_code)
          return false;
      }
    }
  }

  for (std::size_t i = 0; i < a.vars.size(); ++i) {
    const VarDef& x = a.vars[i];
    const VarDef& y = b.vars[i];
    if (x.kind != y.kind || x.name != y.name || x.type_name != y.type_name ||
        x.direction != y.direction)
      return false;
    if ((x.init != nullptr) != (y.init != nullptr)) return false;
    if (x.init && !structurally_equal(*x.init, *y.init)) return false;
    if (x.clauses.size() != y.clauses.size()) return false;
    for (std::size_t j = 0; j < x.clauses.size(); ++j)
      if (!equal_clause(x.clauses[j], y.clauses[j])) return false;
    if (!equal_functions(x.priorities, y.priorities) ||
        !equal_functions(x.definitions, y.definitions))
      return false;
  }

  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    if (a.rules[i].name != b.rules[i].name) return false;
    if (!equal_clause(a.rules[i].impl, b.rules[i].impl)) return false;
  }
  return true;
}

}  // namespace vml
