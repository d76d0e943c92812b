#include "minizinc.hpp"

#include <cmath>
#include <sstream>

namespace vml {

namespace {

bool integral(double x) { return x == std::floor(x) && std::fabs(x) < 1e15; }

bool integral_domain(const Domain& d) {
  return d.kind() == Domain::Kind::Numeric && integral(d.lo()) && integral(d.hi()) &&
         integral(d.precision());
}

std::string mzn_int(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.0f", x);
  return buf;
}

std::string mzn_float(double x) {
  std::string s = format_double(x);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

class Emitter {
 public:
  explicit Emitter(const ConstraintProblem& cp)
      : cp_(cp), tm_(*cp.model), evaluator_(cp.model->evaluator()) {}

  std::string run() {
    std::ostringstream out;
    out << "% generated by vml from " << tm_.model->source_name << "\n";
    emit_parameters(out);
    emit_general_vars(out);
    emit_priorities(out);
    emit_decisions(out);
    emit_constraints(out);
    emit_aux(out);
    emit_solve(out);
    return out.str();
  }

 private:
  // True when the node's value is float-typed in the emitted model.
  bool float_node(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Number:
        return !e.number_is_int;
      case Expr::Kind::VarRef: {
        if (e.info.symbol == SymbolKind::EnumLiteral) return false;
        const Symbol* sym = tm_.find_symbol(e.name);
        if (!sym) return false;
        if (sym->kind == VarKind::General)
          return sym->type.kind == ExprInfo::TypeKind::Number;  // emitted as float:
        if (sym->domain) return !integral_domain(*sym->domain);
        return true;
      }
      case Expr::Kind::Unary:
        return e.uop == UnaryOp::Neg && float_node(*e.args[0]);
      case Expr::Kind::Binary:
        if (e.bop == BinaryOp::And || e.bop == BinaryOp::Or || is_comparison(e.bop))
          return false;
        if (e.bop == BinaryOp::Div) return true;  // '/' is real division
        return float_node(*e.args[0]) || float_node(*e.args[1]);
      case Expr::Kind::Call:
        if (e.builtin == Builtin::Exp) return true;
        if (e.args.size() == 1 &&
            (e.builtin == Builtin::Min || e.builtin == Builtin::Max))
          return true;  // folded to a float literal
        for (const auto& a : e.args)
          if (float_node(*a)) return true;
        return false;
    }
    return false;
  }

  int precedence(const Expr& e) const {
    switch (e.kind) {
      case Expr::Kind::Binary:
        switch (e.bop) {
          case BinaryOp::Or: return 1;
          case BinaryOp::And: return 2;
          default:
            return is_comparison(e.bop)
                       ? 3
                       : (e.bop == BinaryOp::Add || e.bop == BinaryOp::Sub ? 4 : 5);
        }
      case Expr::Kind::Unary:
        return 6;
      default:
        return 7;
    }
  }

  // Renders with MiniZinc syntax; `want_float` wraps integer-typed numeric
  // subexpressions in int2float(...). Scale factors mirror the evaluator's
  // unit homogenization so emitted text and built-in solving agree.
  std::string render(const Expr& e, bool want_float, int parent_prec = 0) const {
    std::string body = render_inner(e, want_float, parent_prec);
    return body;
  }

  std::string scaled_operand(const Expr& e, bool want_float, int prec,
                             double factor) const {
    std::string s = render(e, want_float, factor == 1.0 ? prec : 5);
    if (factor == 1.0) return s;
    return s + " * " + mzn_float(factor);
  }

  std::string render_inner(const Expr& e, bool want_float, int parent_prec) const {
    // int -> float promotion happens at the outermost integer node
    if (want_float && !float_node(e) && e.info.type != ExprInfo::TypeKind::Boolean &&
        e.kind != Expr::Kind::Number)
      return "int2float(" + render_inner(e, false, 0) + ")";

    switch (e.kind) {
      case Expr::Kind::Number:
        return want_float ? mzn_float(e.number)
                          : (e.number_is_int ? mzn_int(e.number) : mzn_float(e.number));

      case Expr::Kind::VarRef:
        if (e.info.symbol == SymbolKind::EnumLiteral)
          return std::to_string(e.info.literal_code);
        return e.name;

      case Expr::Kind::Unary: {
        if (e.uop == UnaryOp::Not)
          return "not (" + render(*e.args[0], false, 0) + ")";
        std::string s = "-" + render(*e.args[0], want_float, 6 + 1);
        return parent_prec > 6 ? "(" + s + ")" : s;
      }

      case Expr::Kind::Binary: {
        int prec = precedence(e);
        std::string text;

        if (e.bop == BinaryOp::And || e.bop == BinaryOp::Or) {
          text = render(*e.args[0], false, prec) +
                 (e.bop == BinaryOp::And ? " /\\ " : " \\/ ") +
                 render(*e.args[1], false, prec + 1);
        } else if (is_comparison(e.bop)) {
          bool float_cmp = float_node(*e.args[0]) || float_node(*e.args[1]);
          const Unit& ua = e.args[0]->info.unit;
          const Unit& ub = e.args[1]->info.unit;
          double fa = 1.0, fb = 1.0;
          homogenization_factors(ua, ub, fa, fb);
          if (fa != 1.0 || fb != 1.0) float_cmp = true;
          std::string_view op = e.bop == BinaryOp::Eq    ? "="
                                : e.bop == BinaryOp::Ne  ? "!="
                                : e.bop == BinaryOp::Lt  ? "<"
                                : e.bop == BinaryOp::Le  ? "<="
                                : e.bop == BinaryOp::Gt  ? ">"
                                                         : ">=";
          text = scaled_operand(*e.args[0], float_cmp, prec, fa) + " " +
                 std::string(op) + " " +
                 scaled_operand(*e.args[1], float_cmp, prec + 1, fb);
        } else {
          bool f = want_float || float_node(e);
          double fa = 1.0, fb = 1.0;
          if (e.bop == BinaryOp::Add || e.bop == BinaryOp::Sub) {
            homogenization_factors(e.args[0]->info.unit, e.args[1]->info.unit, fa, fb);
          } else {
            multiplicative_factors(e, fa, fb);
          }
          if (fa != 1.0 || fb != 1.0) f = true;
          std::string_view op = e.bop == BinaryOp::Add   ? "+"
                                : e.bop == BinaryOp::Sub ? "-"
                                : e.bop == BinaryOp::Mul ? "*"
                                                         : "/";
          text = scaled_operand(*e.args[0], f, prec, fa) + " " + std::string(op) +
                 " " + scaled_operand(*e.args[1], f, prec + 1, fb);
        }
        return prec < parent_prec ? "(" + text + ")" : text;
      }

      case Expr::Kind::Call: {
        if (e.args.size() == 1 &&
            (e.builtin == Builtin::Min || e.builtin == Builtin::Max)) {
          // Range extremum over a declared domain is a constant; fold it.
          double v = evaluator_.eval(e, {}).as_number();
          return mzn_float(v);
        }
        std::string name = e.builtin == Builtin::Exp   ? "exp"
                           : e.builtin == Builtin::Abs ? "abs"
                           : e.builtin == Builtin::Min ? "min"
                                                       : "max";
        bool f = e.builtin == Builtin::Exp ? true : want_float || float_node(e);
        std::string text = name;
        text += '(';
        for (std::size_t i = 0; i < e.args.size(); ++i) {
          if (i) text += ", ";
          text += render(*e.args[i], f, 0);
        }
        text += ')';
        return text;
      }
    }
    return "0";
  }

  static void homogenization_factors(const Unit& a, const Unit& b, double& fa,
                                     double& fb) {
    if (a == b || a.is_dimensionless() || b.is_dimensionless()) return;
    if (a.dimension == b.dimension) {
      fa = a.to_si;
      fb = b.to_si;
    }
  }

  static void multiplicative_factors(const Expr& e, double& fa, double& fb) {
    const Unit& a = e.args[0]->info.unit;
    const Unit& b = e.args[1]->info.unit;
    if (a.is_dimensionless() || b.is_dimensionless()) return;
    if (e.bop == BinaryOp::Div && a == b) return;
    fa = a.to_si;
    fb = b.to_si;
  }

  void emit_parameters(std::ostringstream& out) const {
    for (const auto& param : cp_.parameters) {
      const Symbol* sym = param.symbol;
      if (sym && sym->type.kind == ExprInfo::TypeKind::Boolean) {
        out << "bool: " << param.name << ";\n";
      } else if (sym && sym->type.kind == ExprInfo::TypeKind::Enum) {
        out << "int: " << param.name << ";";
        append_enum_comment(out, sym->type.enum_type);
        out << "\n";
      } else if (sym && sym->domain && integral_domain(*sym->domain)) {
        out << "int: " << param.name << ";\n";
      } else {
        out << "float: " << param.name << ";\n";
      }
    }
  }

  void emit_general_vars(std::ostringstream& out) const {
    for (const VarDef* g : tm_.general_order) {
      if (!g->init) continue;
      const Symbol* sym = tm_.find_symbol(g->name);
      bool boolean = sym && sym->type.kind == ExprInfo::TypeKind::Boolean;
      out << (boolean ? "bool: " : "float: ") << g->name << " = "
          << render(*g->init, !boolean) << ";\n";
    }
  }

  void emit_priorities(std::ostringstream& out) const {
    for (const auto& term : cp_.objective) {
      out << "float: priority_" << term.property << " = " << weight_text(term)
          << ";\n";
    }
  }

  std::string weight_text(const ObjectiveTerm& term) const {
    std::string text;
    for (std::size_t i = 0; i < term.priorities.size(); ++i) {
      const NormalizedFn& nf = term.priorities[i];
      std::string normalized = "((" + render(*nf.fn->body, true) + " - " +
                               mzn_float(nf.norm.min) + ") / (" +
                               mzn_float(nf.norm.max) + " - " + mzn_float(nf.norm.min) +
                               "))";
      if (i) text += " + ";
      text += normalized;
    }
    if (term.priorities.size() > 1)
      text = "((" + text + ") / " + mzn_float(double(term.priorities.size())) + ")";
    return text;
  }

  void emit_decisions(std::ostringstream& out) const {
    for (const auto& decision : cp_.decisions) {
      const Domain& d = decision.domain;
      switch (d.kind()) {
        case Domain::Kind::Numeric:
          if (integral_domain(d))
            out << "var " << mzn_int(d.lo()) << ".." << mzn_int(d.hi()) << ": "
                << decision.name << ";\n";
          else
            out << "var " << mzn_float(d.lo()) << ".." << mzn_float(d.hi()) << ": "
                << decision.name << ";\n";
          break;
        case Domain::Kind::Enum: {
          bool contiguous = true;
          for (std::size_t i = 0; i < d.size(); ++i)
            if (d.value(i) != d.lo() + static_cast<double>(i)) contiguous = false;
          if (contiguous) {
            out << "var " << mzn_int(d.lo()) << ".." << mzn_int(d.hi()) << ": "
                << decision.name << ";";
          } else {
            out << "var {";
            for (std::size_t i = 0; i < d.size(); ++i)
              out << (i ? "," : "") << mzn_int(d.value(i));
            out << "}: " << decision.name << ";";
          }
          append_enum_comment(out, d.enum_type());
          out << "\n";
          break;
        }
        case Domain::Kind::Boolean:
          out << "var bool: " << decision.name << ";\n";
          break;
      }
    }
  }

  void append_enum_comment(std::ostringstream& out, const EnumType* et) const {
    if (!et) return;
    out << " %";
    for (const auto& lit : et->literals) out << ' ' << lit.name << '=' << lit.code;
  }

  void emit_constraints(std::ostringstream& out) const {
    for (const auto& c : cp_.constraints) {
      out << "constraint ";
      if (c.guard) out << render(*c.guard, false) << " -> ";
      out << render(*c.consequence, false) << ";\n";
    }
  }

  std::string aux_name(const ObjectiveTerm& term, std::size_t def_index) const {
    std::string name = "value_" + term.property;
    if (term.definitions.size() > 1) name += "_" + std::to_string(def_index);
    return name;
  }

  void emit_aux(std::ostringstream& out) const {
    for (const auto& term : cp_.objective) {
      for (std::size_t i = 0; i < term.definitions.size(); ++i) {
        const NormalizedFn& def = term.definitions[i];
        if (!def.surrogate) continue;
        const PiecewiseLinear& pl = *def.surrogate;
        std::string var = def.fn->params[0];
        bool float_var = true;
        if (const auto* decision = cp_.find_decision(var))
          float_var = !integral_domain(decision->domain);
        std::string vref = float_var ? var : "int2float(" + var + ")";

        out << "var 0.0..100.0: " << aux_name(term, i) << ";\n";
        for (std::size_t j = 0; j < pl.segment_count(); ++j) {
          bool last = j + 1 == pl.segment_count();
          out << "constraint " << vref << " >= " << mzn_float(pl.breakpoints[j])
              << " /\\ " << vref << (last ? " <= " : " < ")
              << mzn_float(pl.breakpoints[j + 1]) << " -> " << aux_name(term, i)
              << " = " << mzn_float(pl.slopes[j]) << " * " << vref;
          double intercept = pl.intercepts[j];
          if (intercept < 0.0)
            out << " - " << mzn_float(-intercept);
          else if (intercept > 0.0)
            out << " + " << mzn_float(intercept);
          out << ";\n";
        }
      }
    }
  }

  std::string definition_text(const ObjectiveTerm& term, std::size_t i) const {
    const NormalizedFn& def = term.definitions[i];
    if (def.surrogate) return aux_name(term, i);
    if (!def.affine)
      throw Error("non-linearized-term",
                  "definition of '" + term.property +
                      "' is nonlinear over several decision variables and cannot "
                      "be emitted");
    return "100.0 * (" + render(*def.fn->body, true) + " - " +
           mzn_float(def.norm.min) + ") / (" + mzn_float(def.norm.max) + " - " +
           mzn_float(def.norm.min) + ")";
  }

  void emit_solve(std::ostringstream& out) const {
    if (cp_.objective.empty()) {
      out << "solve satisfy;\n";
      return;
    }
    out << "solve minimize ";
    for (std::size_t t = 0; t < cp_.objective.size(); ++t) {
      const ObjectiveTerm& term = cp_.objective[t];
      std::string combined;
      if (term.definitions.size() == 1) {
        combined = definition_text(term, 0);
      } else {
        for (std::size_t i = 0; i < term.definitions.size(); ++i) {
          if (i) combined += " + ";
          combined += definition_text(term, i);
        }
        combined = "((" + combined + ") / " + mzn_float(double(term.definitions.size())) + ")";
      }

      bool bare = combined.find(' ') == std::string::npos;
      std::string value_part;
      if (term.sign < 0)
        value_part = "( -1.0 * " + combined + " )";
      else
        value_part = bare ? combined : "( " + combined + " )";

      if (t) out << " + ";
      out << "priority_" << term.property << " * " << value_part;
    }
    out << ";\n";
  }

  const ConstraintProblem& cp_;
  const TypedModel& tm_;
  Evaluator evaluator_;
};

}  // namespace

std::string emit_minizinc(const ConstraintProblem& cp) { return Emitter(cp).run(); }

}  // namespace vml
