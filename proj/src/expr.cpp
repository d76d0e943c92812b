#include "expr.hpp"

#include <cmath>

namespace vml {

bool is_comparison(BinaryOp op) {
  switch (op) {
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge:
    case BinaryOp::Eq:
    case BinaryOp::Ne:
      return true;
    default:
      return false;
  }
}

std::string_view binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "=";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
  }
  return "?";
}

ExprPtr Expr::make_number(double v, bool is_int, Span span) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Number;
  e->number = v;
  e->number_is_int = is_int;
  e->span = span;
  return e;
}

ExprPtr Expr::make_var(std::string name, Span span) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::VarRef;
  e->name = std::move(name);
  e->span = span;
  return e;
}

ExprPtr Expr::make_unary(UnaryOp op, ExprPtr operand, Span span) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Unary;
  e->uop = op;
  e->span = span;
  e->args.push_back(std::move(operand));
  return e;
}

ExprPtr Expr::make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, Span span) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Binary;
  e->bop = op;
  e->span = span;
  e->args.push_back(std::move(lhs));
  e->args.push_back(std::move(rhs));
  return e;
}

ExprPtr Expr::make_call(Builtin fn, std::vector<ExprPtr> call_args, Span span) {
  auto e = std::make_unique<Expr>();
  e->kind = Kind::Call;
  e->builtin = fn;
  e->span = span;
  e->args = std::move(call_args);
  return e;
}

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->span = span;
  e->number = number;
  e->number_is_int = number_is_int;
  e->name = name;
  e->uop = uop;
  e->bop = bop;
  e->builtin = builtin;
  e->info = info;
  e->args.reserve(args.size());
  for (const auto& a : args) e->args.push_back(a->clone());
  return e;
}

void collect_var_refs(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::VarRef) out.insert(e.name);
  for (const auto& a : e.args) collect_var_refs(*a, out);
}

void collect_variable_refs(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::VarRef && e.info.symbol != SymbolKind::EnumLiteral)
    out.insert(e.name);
  for (const auto& a : e.args) collect_variable_refs(*a, out);
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Expr::Kind::Number:
      if (a.number != b.number || a.number_is_int != b.number_is_int) return false;
      break;
    case Expr::Kind::VarRef:
      if (a.name != b.name) return false;
      break;
    case Expr::Kind::Unary:
      if (a.uop != b.uop) return false;
      break;
    case Expr::Kind::Binary:
      if (a.bop != b.bop) return false;
      break;
    case Expr::Kind::Call:
      if (a.builtin != b.builtin) return false;
      break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

namespace {

double numeric_operand(const Value& v, const Expr& node) {
  if (v.is_bool())
    throw Error("type-mismatch", "arithmetic on a boolean value at '" +
                                     (node.kind == Expr::Kind::VarRef ? node.name
                                                                      : std::string("expression")) +
                                     "'");
  return v.as_number();
}

// Homogenize two magnitudes for addition-like operations. Identical units
// and dimensionless/dimensional mixes operate directly; one dimension in
// two units goes through SI.
void homogenize_additive(double& a, const Unit& ua, double& b, const Unit& ub) {
  if (ua == ub) return;
  if (ua.is_dimensionless() || ub.is_dimensionless()) return;
  if (ua.dimension == ub.dimension) {
    a = a * ua.to_si;
    b = b * ub.to_si;
    return;
  }
  throw Error("unit-mismatch", "operands of dimensions " +
                                   std::string(dimension_name(ua.dimension)) + " and " +
                                   std::string(dimension_name(ub.dimension)));
}

}  // namespace

Value Evaluator::eval(const Expr& e, const Env& env) const {
  switch (e.kind) {
    case Expr::Kind::Number:
      return Value::of_number(e.number);

    case Expr::Kind::VarRef: {
      if (e.info.symbol == SymbolKind::EnumLiteral)
        return Value::of_enum(e.info.enum_type, e.info.literal_code);
      auto it = env.find(e.name);
      if (it == env.end())
        throw Error("unbound-variable", "no value bound for '" + e.name + "'");
      return it->second;
    }

    case Expr::Kind::Unary: {
      Value v = eval(*e.args[0], env);
      if (e.uop == UnaryOp::Neg) return Value::of_number(-numeric_operand(v, *e.args[0]));
      return Value::of_bool(!v.as_bool());
    }

    case Expr::Kind::Binary: {
      if (e.bop == BinaryOp::And || e.bop == BinaryOp::Or) {
        bool lhs = eval(*e.args[0], env).as_bool();
        if (e.bop == BinaryOp::And && !lhs) return Value::of_bool(false);
        if (e.bop == BinaryOp::Or && lhs) return Value::of_bool(true);
        return Value::of_bool(eval(*e.args[1], env).as_bool());
      }

      Value lv = eval(*e.args[0], env);
      Value rv = eval(*e.args[1], env);

      if (is_comparison(e.bop)) {
        if (lv.is_bool() || rv.is_bool()) {
          if (e.bop != BinaryOp::Eq && e.bop != BinaryOp::Ne)
            throw Error("type-mismatch", "ordering comparison on booleans");
          bool eq = lv.as_bool() == rv.as_bool();
          return Value::of_bool(e.bop == BinaryOp::Eq ? eq : !eq);
        }
        double a = lv.as_number(), b = rv.as_number();
        homogenize_additive(a, e.args[0]->info.unit, b, e.args[1]->info.unit);
        switch (e.bop) {
          case BinaryOp::Lt: return Value::of_bool(a < b);
          case BinaryOp::Le: return Value::of_bool(a <= b);
          case BinaryOp::Gt: return Value::of_bool(a > b);
          case BinaryOp::Ge: return Value::of_bool(a >= b);
          case BinaryOp::Eq: return Value::of_bool(a == b);
          default: return Value::of_bool(a != b);
        }
      }

      double a = numeric_operand(lv, *e.args[0]);
      double b = numeric_operand(rv, *e.args[1]);
      const Unit& ua = e.args[0]->info.unit;
      const Unit& ub = e.args[1]->info.unit;

      switch (e.bop) {
        case BinaryOp::Add:
        case BinaryOp::Sub:
          homogenize_additive(a, ua, b, ub);
          return Value::of_number(e.bop == BinaryOp::Add ? a + b : a - b);

        case BinaryOp::Mul:
          if (!ua.is_dimensionless() && !ub.is_dimensionless()) {
            if (!multiply_dimensions(ua.dimension, ub.dimension))
              throw Error("unit-mismatch", "unsupported product of " +
                                               std::string(dimension_name(ua.dimension)) + " and " +
                                               std::string(dimension_name(ub.dimension)));
            a *= ua.to_si;
            b *= ub.to_si;
          }
          return Value::of_number(a * b);

        case BinaryOp::Div: {
          if (!ua.is_dimensionless() && !ub.is_dimensionless() && !(ua == ub)) {
            if (!divide_dimensions(ua.dimension, ub.dimension))
              throw Error("unit-mismatch", "unsupported quotient of " +
                                               std::string(dimension_name(ua.dimension)) + " and " +
                                               std::string(dimension_name(ub.dimension)));
            a *= ua.to_si;
            b *= ub.to_si;
          }
          if (b == 0.0) throw Error("division-by-zero", "division by zero");
          return Value::of_number(a / b);
        }

        default:
          break;
      }
      throw Error("internal", "unhandled binary operator");
    }

    case Expr::Kind::Call: {
      // Single-argument min/max is the extremum over the referenced
      // variable's declared domain.
      if (e.args.size() == 1 && (e.builtin == Builtin::Min || e.builtin == Builtin::Max)) {
        std::set<std::string> vars;
        collect_variable_refs(*e.args[0], vars);
        if (vars.size() != 1)
          throw Error("extremum-arity",
                      "range extremum requires an expression over exactly one variable");
        const std::string& var = *vars.begin();
        const Domain* domain = lookup_ ? lookup_(var) : nullptr;
        if (!domain)
          throw Error("unknown-domain", "no declared domain for '" + var + "'");

        Env scan = env;
        bool first = true;
        double best = 0.0;
        for (std::size_t i = 0; i < domain->size(); ++i) {
          double gv = domain->value(i);
          scan[var] = domain->kind() == Domain::Kind::Enum
                          ? Value::of_enum(domain->enum_type(), static_cast<int>(gv))
                          : Value::of_number(gv);
          double candidate = eval(*e.args[0], scan).as_number();
          if (first || (e.builtin == Builtin::Max ? candidate > best : candidate < best)) {
            best = candidate;
            first = false;
          }
        }
        return Value::of_number(best);
      }

      if (e.builtin == Builtin::Min || e.builtin == Builtin::Max) {
        double a = numeric_operand(eval(*e.args[0], env), *e.args[0]);
        double b = numeric_operand(eval(*e.args[1], env), *e.args[1]);
        homogenize_additive(a, e.args[0]->info.unit, b, e.args[1]->info.unit);
        return Value::of_number(e.builtin == Builtin::Max ? std::max(a, b) : std::min(a, b));
      }

      double x = numeric_operand(eval(*e.args[0], env), *e.args[0]);
      return Value::of_number(e.builtin == Builtin::Exp ? std::exp(x) : std::fabs(x));
    }
  }
  throw Error("internal", "unhandled expression kind");
}

Value eval_expr(const Expr& e, const Env& env, const Evaluator& evaluator) {
  return evaluator.eval(e, env);
}

}  // namespace vml
